// Copyright 2026 The dragfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dragfl/drag_core.h"

#include <cmath>
#include <string>

#include "dragfl/errors.h"

namespace dragfl {
namespace {

void CheckSameSize(const ParamVector& a, const ParamVector& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": length mismatch");
  }
}

DivergenceScore ScoreFor(const ParamVector& g, const ParamVector& r,
                         double lambda, double ng, double nr) {
  DivergenceScore s;
  s.lambda = lambda;
  if (ng <= kDegenerateNorm || nr <= kDegenerateNorm) {
    s.degenerate = true;
  } else {
    s.cosine = Cosine(g, r);
  }
  return s;
}

}  // namespace

void DragConfig::Validate() const {
  if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("drag.c", "must lie in [0, 1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("drag.alpha", "must lie in (0, 1]");
  }
}

DivergenceScore DegreeOfDivergence(const ParamVector& g, const ParamVector& r,
                                   double c) {
  CheckSameSize(g, r, "DegreeOfDivergence");
  if (!(c >= 0.0 && c <= 1.0)) {
    throw InvalidArgumentError("DegreeOfDivergence: c must lie in [0, 1]");
  }
  DivergenceScore s;
  if (Norm(g) <= kDegenerateNorm || Norm(r) <= kDegenerateNorm) {
    s.degenerate = true;
    return s;
  }
  s.cosine = Cosine(g, r);
  s.lambda = c * (1.0 - s.cosine);
  return s;
}

ModifiedUpdate DragManipulate(const ParamVector& g, const ParamVector& r,
                              double lambda) {
  CheckSameSize(g, r, "DragManipulate");
  if (!(lambda >= 0.0)) throw InvalidArgumentError("DragManipulate: lambda must be >= 0");
  const double ng = Norm(g);
  const double nr = Norm(r);
  const DivergenceScore score = ScoreFor(g, r, lambda, ng, nr);
  if (score.degenerate) return {g, score, true};
  return {Axpy(Scale(g, 1.0 - lambda), lambda * ng / nr, r), score, false};
}

ModifiedUpdate ByzantineManipulate(const ParamVector& g, const ParamVector& r,
                                   double lambda) {
  CheckSameSize(g, r, "ByzantineManipulate");
  if (!(lambda >= 0.0)) {
    throw InvalidArgumentError("ByzantineManipulate: lambda must be >= 0");
  }
  const double ng = Norm(g);
  const double nr = Norm(r);
  const DivergenceScore score = ScoreFor(g, r, lambda, ng, nr);
  if (nr <= kDegenerateNorm) return {g, score, true};
  if (ng <= kDegenerateNorm) return {r, score, true};
  return {Axpy(Scale(g, (1.0 - lambda) * nr / ng), lambda, r), score, false};
}

ReferenceState InitReference(std::span<const ParamVector> raw_updates,
                             bool keep_history) {
  if (raw_updates.empty()) throw InvalidArgumentError("InitReference: empty list");
  ReferenceState s;
  s.r = Mean(raw_updates);
  s.keep_history = keep_history;
  if (keep_history) s.round0_updates.assign(raw_updates.begin(), raw_updates.end());
  return s;
}

ReferenceState UpdateReference(const ReferenceState& state,
                               const ParamVector& delta_prev, double alpha) {
  if (!state.initialized()) throw StateError("UpdateReference: state not initialized");
  CheckSameSize(*state.r, delta_prev, "UpdateReference");
  ReferenceState next = state;
  next.r = Axpy(Scale(*state.r, 1.0 - alpha), alpha, delta_prev);
  if (next.keep_history) {
    const int round = static_cast<int>(next.history.size());
    next.history.emplace_back(round, delta_prev);
  }
  return next;
}

ParamVector ClosedFormReference(std::span<const ParamVector> g0_updates,
                                std::span<const ParamVector> deltas,
                                double alpha, int t) {
  if (t < 1 || deltas.size() != static_cast<std::size_t>(t)) {
    throw InvalidArgumentError("ClosedFormReference: need exactly t >= 1 deltas");
  }
  ParamVector out = Scale(Mean(g0_updates), std::pow(1.0 - alpha, t));
  for (int i = 0; i < t; ++i) {
    out = Axpy(out, alpha * std::pow(1.0 - alpha, t - i - 1), deltas[i]);
  }
  return out;
}

ParamVector AggregateModified(std::span<const ModifiedUpdate> mods) {
  if (mods.empty()) throw InvalidArgumentError("AggregateModified: empty list");
  std::vector<ParamVector> vs;
  vs.reserve(mods.size());
  for (const ModifiedUpdate& m : mods) vs.push_back(m.v);
  return Mean(vs);
}

ParamVector FedAvgAggregate(std::span<const ParamVector> updates,
                            const ParamVector& theta) {
  if (updates.empty()) throw InvalidArgumentError("FedAvgAggregate: empty list");
  const ParamVector mean = Mean(updates);
  CheckSameSize(theta, mean, "FedAvgAggregate");
  return Axpy(theta, 1.0, mean);
}

}  // namespace dragfl

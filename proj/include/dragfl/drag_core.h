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

#ifndef DRAGFL_DRAG_CORE_H_
#define DRAGFL_DRAG_CORE_H_

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dragfl/vecmath.h"

namespace dragfl {

struct DragConfig {
  double c = 0.25;      // divergence scale, [0, 1]
  double alpha = 0.6;   // reference momentum weight, (0, 1]

  void Validate() const;
};

// lambda = c * (1 - cos(g, r)), always in [0, 2c].
struct DivergenceScore {
  double lambda = 0.0;
  double cosine = 1.0;
  bool degenerate = false;  // g or r had norm <= kDegenerateNorm
};

struct ModifiedUpdate {
  ParamVector v;
  DivergenceScore score;
  bool degenerate = false;  // manipulation skipped
};

// Degenerate inputs yield lambda = 0, cosine = 1, degenerate = true.
DivergenceScore DegreeOfDivergence(const ParamVector& g, const ParamVector& r,
                                   double c);

// v = (1 - lambda) g + lambda (|g| / |r|) r.
// v = g (flagged degenerate) when either norm is <= kDegenerateNorm.
ModifiedUpdate DragManipulate(const ParamVector& g, const ParamVector& r,
                              double lambda);

// Norm-normalized rule for the robust mode:
// v = (1 - lambda) (|r| / |g|) g + lambda r.
// v = r when g vanishes, v = g when r vanishes.
ModifiedUpdate ByzantineManipulate(const ParamVector& g, const ParamVector& r,
                                   double lambda);

// Reference direction carried across rounds. Default-constructed states are
// uninitialized.
struct ReferenceState {
  std::optional<ParamVector> r;
  // Closed-form verification only: the round-0 raw updates and every
  // aggregated update fed to UpdateReference, as (round, delta).
  bool keep_history = false;
  std::vector<ParamVector> round0_updates;
  std::vector<std::pair<int, ParamVector>> history;

  bool initialized() const { return r.has_value(); }
};

// r0 = mean of the round-0 raw client updates.
ReferenceState InitReference(std::span<const ParamVector> raw_updates,
                             bool keep_history = false);

// r <- (1 - alpha) r + alpha delta_prev.
ReferenceState UpdateReference(const ReferenceState& state,
                               const ParamVector& delta_prev, double alpha);

// Unrolled recursion after t updates:
//   (1-alpha)^t mean(g0) + sum_{i<t} alpha (1-alpha)^(t-i-1) delta_i
// where g0 are the round-0 raw updates. Verification oracle for the
// recursive form; requires deltas.size() == t >= 1.
ParamVector ClosedFormReference(std::span<const ParamVector> g0_updates,
                                std::span<const ParamVector> deltas,
                                double alpha, int t);

// Mean of the modified updates.
ParamVector AggregateModified(std::span<const ModifiedUpdate> mods);

// theta + mean(updates).
ParamVector FedAvgAggregate(std::span<const ParamVector> updates,
                            const ParamVector& theta);

}  // namespace dragfl

#endif  // DRAGFL_DRAG_CORE_H_

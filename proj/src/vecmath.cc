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

#include "dragfl/vecmath.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "dragfl/errors.h"

namespace dragfl {
namespace {

void CheckFinite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw NonFiniteError(std::string(what) + ": non-finite entry");
    }
  }
}

void CheckSameSize(const ParamVector& a, const ParamVector& b,
                   const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": length mismatch (" +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
}

}  // namespace

ParamVector::ParamVector(std::size_t dim) : values_(dim, 0.0) {
  if (dim == 0) throw DimensionError("ParamVector: dimension must be >= 1");
}

ParamVector::ParamVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw DimensionError("ParamVector: dimension must be >= 1");
  }
  CheckFinite(values_, "ParamVector");
}

ParamVector::ParamVector(std::initializer_list<double> values)
    : ParamVector(std::vector<double>(values)) {}

double Inner(const ParamVector& a, const ParamVector& b) {
  CheckSameSize(a, b, "Inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Norm(const ParamVector& a) {
  double s = 0.0;
  for (double x : a.values()) s += x * x;
  return std::sqrt(s);
}

ParamVector Scale(const ParamVector& a, double c) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return ParamVector(std::move(out));
}

ParamVector Axpy(const ParamVector& a, double c, const ParamVector& b) {
  CheckSameSize(a, b, "Axpy");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + c * b[i];
  return ParamVector(std::move(out));
}

double Cosine(const ParamVector& a, const ParamVector& b) {
  CheckSameSize(a, b, "Cosine");
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na <= kDegenerateNorm || nb <= kDegenerateNorm) {
    throw DegenerateVectorError("Cosine: near-zero vector");
  }
  return std::clamp(Inner(a, b) / (na * nb), -1.0, 1.0);
}

ParamVector Mean(std::span<const ParamVector> vs) {
  if (vs.empty()) throw InvalidArgumentError("Mean: empty list");
  std::vector<double> acc(vs.front().size(), 0.0);
  for (const ParamVector& v : vs) {
    CheckSameSize(vs.front(), v, "Mean");
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
  }
  const double n = static_cast<double>(vs.size());
  for (double& x : acc) x /= n;
  return ParamVector(std::move(acc));
}

}  // namespace dragfl

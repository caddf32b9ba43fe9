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

#ifndef DRAGFL_VECMATH_H_
#define DRAGFL_VECMATH_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dragfl {

// Norms at or below this value are treated as zero wherever a direction is
// needed (cosine, norm-matching in the manipulation rules).
inline constexpr double kDegenerateNorm = 1e-12;

// Flat real vector holding model parameters, client updates and reference
// directions. Length is fixed at construction (>= 1) and every entry is
// finite; operations that would break either property throw.
class ParamVector {
 public:
  // Zero vector of the given dimension.
  explicit ParamVector(std::size_t dim);
  explicit ParamVector(std::vector<double> values);
  ParamVector(std::initializer_list<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vec() const { return values_; }

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<double> values_;
};

double Inner(const ParamVector& a, const ParamVector& b);
double Norm(const ParamVector& a);
ParamVector Scale(const ParamVector& a, double c);

// a + c * b.
ParamVector Axpy(const ParamVector& a, double c, const ParamVector& b);

// Cosine of the angle between a and b, clamped to [-1, 1]. Throws
// DegenerateVectorError if either norm is <= kDegenerateNorm.
double Cosine(const ParamVector& a, const ParamVector& b);

// Arithmetic mean, summed in the order given. Throws on an empty list.
ParamVector Mean(std::span<const ParamVector> vs);

}  // namespace dragfl

#endif  // DRAGFL_VECMATH_H_

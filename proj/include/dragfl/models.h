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

#ifndef DRAGFL_MODELS_H_
#define DRAGFL_MODELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dragfl/vecmath.h"

namespace dragfl {

struct Example {
  std::vector<double> features;
  int label = 0;
};

enum class ModelKind { kLogistic, kMlp };

std::string ModelKindName(ModelKind kind);
ModelKind ParseModelKind(const std::string& name);

// Shape of a softmax classifier.
//
// Parameter layout (row-major blocks, concatenated):
//   logistic: W[K][D], b[K]
//   mlp:      W1[H][D], b1[H], W2[K][H], b2[K]   with tanh hidden units
struct ModelSpec {
  ModelKind kind = ModelKind::kLogistic;
  int input_dim = 1;
  int num_classes = 2;
  int hidden_units = 0;  // mlp only

  std::size_t ParamDim() const;
  void Validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer, biases included.
ParamVector InitParams(const ModelSpec& spec, uint64_t seed);

// Mean cross-entropy of the softmax predictions over `batch`.
double Loss(const ModelSpec& spec, const ParamVector& theta,
            std::span<const Example> batch);

// Mean gradient of Loss with respect to theta.
ParamVector Grad(const ModelSpec& spec, const ParamVector& theta,
                 std::span<const Example> batch);

// Fraction of examples whose argmax class (lowest index on ties) equals the
// label.
double Accuracy(const ModelSpec& spec, const ParamVector& theta,
                std::span<const Example> dataset);

// Largest per-coordinate discrepancy between Grad and central differences
// with step h, |a - n| / max(|a| + |n|, 1e-3). The floor keeps coordinates
// whose true derivative is ~0 from reporting pure rounding noise.
double FdGradientCheck(const ModelSpec& spec, const ParamVector& theta,
                       std::span<const Example> batch, double h);

}  // namespace dragfl

#endif  // DRAGFL_MODELS_H_

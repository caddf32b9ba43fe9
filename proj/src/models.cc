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

#include "dragfl/models.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dragfl/errors.h"
#include "dragfl/rng.h"

namespace dragfl {
namespace {

void CheckInputs(const ModelSpec& spec, const ParamVector& theta,
                 std::span<const Example> batch, const char* what) {
  if (theta.size() != spec.ParamDim()) {
    throw DimensionError(std::string(what) + ": theta has " +
                         std::to_string(theta.size()) + " entries, model needs " +
                         std::to_string(spec.ParamDim()));
  }
  if (batch.empty()) throw InvalidArgumentError(std::string(what) + ": empty batch");
  for (const Example& ex : batch) {
    if (static_cast<int>(ex.features.size()) != spec.input_dim) {
      throw DimensionError(std::string(what) + ": feature dimension mismatch");
    }
    if (ex.label < 0 || ex.label >= spec.num_classes) {
      throw InvalidArgumentError(std::string(what) + ": label out of range");
    }
  }
}

// Per-example activations; `hidden` is used by the mlp only.
struct Forward {
  std::vector<double> hidden;
  std::vector<double> logits;
  std::vector<double> probs;
};

void RunForward(const ModelSpec& spec, std::span<const double> p,
                const Example& ex, Forward& f) {
  const int D = spec.input_dim;
  const int K = spec.num_classes;
  f.logits.assign(K, 0.0);
  if (spec.kind == ModelKind::kLogistic) {
    const double* w = p.data();
    const double* b = w + static_cast<std::size_t>(K) * D;
    for (int k = 0; k < K; ++k) {
      double z = b[k];
      for (int j = 0; j < D; ++j) z += w[k * D + j] * ex.features[j];
      f.logits[k] = z;
    }
  } else {
    const int H = spec.hidden_units;
    const double* w1 = p.data();
    const double* b1 = w1 + static_cast<std::size_t>(H) * D;
    const double* w2 = b1 + H;
    const double* b2 = w2 + static_cast<std::size_t>(K) * H;
    f.hidden.assign(H, 0.0);
    for (int h = 0; h < H; ++h) {
      double z = b1[h];
      for (int j = 0; j < D; ++j) z += w1[h * D + j] * ex.features[j];
      f.hidden[h] = std::tanh(z);
    }
    for (int k = 0; k < K; ++k) {
      double z = b2[k];
      for (int h = 0; h < H; ++h) z += w2[k * H + h] * f.hidden[h];
      f.logits[k] = z;
    }
  }
  const double mx = *std::max_element(f.logits.begin(), f.logits.end());
  f.probs.resize(K);
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    f.probs[k] = std::exp(f.logits[k] - mx);
    sum += f.probs[k];
  }
  for (double& q : f.probs) q /= sum;
}

double ExampleLoss(const Forward& f, int label) {
  const double mx = *std::max_element(f.logits.begin(), f.logits.end());
  double sum = 0.0;
  for (double z : f.logits) sum += std::exp(z - mx);
  return std::log(sum) + mx - f.logits[label];
}

}  // namespace

std::string ModelKindName(ModelKind kind) {
  return kind == ModelKind::kLogistic ? "logistic" : "mlp";
}

ModelKind ParseModelKind(const std::string& name) {
  if (name == "logistic") return ModelKind::kLogistic;
  if (name == "mlp") return ModelKind::kMlp;
  throw ConfigError("model.kind", "expected 'logistic' or 'mlp', got '" + name + "'");
}

std::size_t ModelSpec::ParamDim() const {
  const std::size_t D = input_dim, K = num_classes, H = hidden_units;
  if (kind == ModelKind::kLogistic) return D * K + K;
  return D * H + H + H * K + K;
}

void ModelSpec::Validate() const {
  if (input_dim < 1) throw ConfigError("model.input_dim", "must be >= 1");
  if (num_classes < 2) throw ConfigError("model.num_classes", "must be >= 2");
  if (kind == ModelKind::kMlp && hidden_units < 1) {
    throw ConfigError("model.hidden_units", "must be >= 1 for mlp");
  }
}

ParamVector InitParams(const ModelSpec& spec, uint64_t seed) {
  spec.Validate();
  Rng rng = MakeStream(seed, {kTagInit});
  std::vector<double> p;
  p.reserve(spec.ParamDim());
  auto fill = [&](std::size_t n, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (std::size_t i = 0; i < n; ++i) p.push_back(u(rng));
  };
  const std::size_t D = spec.input_dim, K = spec.num_classes;
  if (spec.kind == ModelKind::kLogistic) {
    fill(K * D + K, spec.input_dim);
  } else {
    const std::size_t H = spec.hidden_units;
    fill(H * D + H, spec.input_dim);
    fill(K * H + K, spec.hidden_units);
  }
  return ParamVector(std::move(p));
}

double Loss(const ModelSpec& spec, const ParamVector& theta,
            std::span<const Example> batch) {
  CheckInputs(spec, theta, batch, "Loss");
  Forward f;
  double total = 0.0;
  for (const Example& ex : batch) {
    RunForward(spec, theta.values(), ex, f);
    total += ExampleLoss(f, ex.label);
  }
  return total / static_cast<double>(batch.size());
}

ParamVector Grad(const ModelSpec& spec, const ParamVector& theta,
                 std::span<const Example> batch) {
  CheckInputs(spec, theta, batch, "Grad");
  const int D = spec.input_dim;
  const int K = spec.num_classes;
  std::vector<double> g(theta.size(), 0.0);
  Forward f;
  std::vector<double> dlogits(K);
  for (const Example& ex : batch) {
    RunForward(spec, theta.values(), ex, f);
    for (int k = 0; k < K; ++k) dlogits[k] = f.probs[k] - (k == ex.label ? 1.0 : 0.0);
    if (spec.kind == ModelKind::kLogistic) {
      double* gw = g.data();
      double* gb = gw + static_cast<std::size_t>(K) * D;
      for (int k = 0; k < K; ++k) {
        for (int j = 0; j < D; ++j) gw[k * D + j] += dlogits[k] * ex.features[j];
        gb[k] += dlogits[k];
      }
    } else {
      const int H = spec.hidden_units;
      const double* w2 = theta.values().data() + static_cast<std::size_t>(H) * D + H;
      double* gw1 = g.data();
      double* gb1 = gw1 + static_cast<std::size_t>(H) * D;
      double* gw2 = gb1 + H;
      double* gb2 = gw2 + static_cast<std::size_t>(K) * H;
      for (int k = 0; k < K; ++k) {
        for (int h = 0; h < H; ++h) gw2[k * H + h] += dlogits[k] * f.hidden[h];
        gb2[k] += dlogits[k];
      }
      for (int h = 0; h < H; ++h) {
        double back = 0.0;
        for (int k = 0; k < K; ++k) back += w2[k * H + h] * dlogits[k];
        const double dz = back * (1.0 - f.hidden[h] * f.hidden[h]);
        for (int j = 0; j < D; ++j) gw1[h * D + j] += dz * ex.features[j];
        gb1[h] += dz;
      }
    }
  }
  const double n = static_cast<double>(batch.size());
  for (double& x : g) x /= n;
  return ParamVector(std::move(g));
}

double Accuracy(const ModelSpec& spec, const ParamVector& theta,
                std::span<const Example> dataset) {
  CheckInputs(spec, theta, dataset, "Accuracy");
  Forward f;
  std::size_t correct = 0;
  for (const Example& ex : dataset) {
    RunForward(spec, theta.values(), ex, f);
    int best = 0;
    for (int k = 1; k < spec.num_classes; ++k) {
      if (f.logits[k] > f.logits[best]) best = k;
    }
    if (best == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

double FdGradientCheck(const ModelSpec& spec, const ParamVector& theta,
                       std::span<const Example> batch, double h) {
  if (!(h > 0.0)) throw InvalidArgumentError("FdGradientCheck: h must be > 0");
  const ParamVector analytic = Grad(spec, theta, batch);
  std::vector<double> probe = theta.vec();
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + h;
    const double up = Loss(spec, ParamVector(probe), batch);
    probe[i] = orig - h;
    const double down = Loss(spec, ParamVector(probe), batch);
    probe[i] = orig;
    const double numeric = (up - down) / (2.0 * h);
    const double a = analytic[i];
    const double err =
        std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), 1e-3);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace dragfl

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

#include "dragfl/data.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dragfl/errors.h"

namespace dragfl {

int Dataset::FeatureDim() const {
  return examples.empty() ? 0 : static_cast<int>(examples.front().features.size());
}

void Dataset::Validate() const {
  if (examples.empty()) throw InvalidArgumentError("Dataset: empty");
  if (num_classes < 1) throw InvalidArgumentError("Dataset: num_classes < 1");
  const std::size_t dim = examples.front().features.size();
  for (const Example& ex : examples) {
    if (ex.features.size() != dim) {
      throw DimensionError("Dataset: inconsistent feature dimension");
    }
    if (ex.label < 0 || ex.label >= num_classes) {
      throw InvalidArgumentError("Dataset: label out of range");
    }
  }
}

namespace {

std::vector<std::vector<double>> MixtureCenters(int num_classes, int dim,
                                                double separation,
                                                uint64_t seed) {
  if (num_classes < 2) throw InvalidArgumentError("GenGaussianMixture: K must be >= 2");
  if (dim < 1) throw InvalidArgumentError("GenGaussianMixture: dim must be >= 1");
  if (!(separation > 0.0)) {
    throw InvalidArgumentError("GenGaussianMixture: separation must be > 0");
  }

  Rng center_rng = MakeStream(seed, {kTagData, 0});
  std::vector<std::vector<double>> centers;
  if (num_classes <= dim) {
    // Distinct basis vectors scaled by s/sqrt(2) are exactly s apart.
    const double a = separation / std::sqrt(2.0);
    std::vector<int> axes(dim);
    std::iota(axes.begin(), axes.end(), 0);
    std::shuffle(axes.begin(), axes.end(), center_rng);
    std::bernoulli_distribution sign(0.5);
    for (int k = 0; k < num_classes; ++k) {
      std::vector<double> c(dim, 0.0);
      c[axes[k]] = sign(center_rng) ? a : -a;
      centers.push_back(std::move(c));
    }
  } else {
    double box = separation * std::pow(static_cast<double>(num_classes), 1.0 / dim);
    int attempts = 0;
    while (static_cast<int>(centers.size()) < num_classes) {
      std::uniform_real_distribution<double> u(-box, box);
      std::vector<double> c(dim);
      for (double& x : c) x = u(center_rng);
      bool ok = true;
      for (const auto& other : centers) {
        double d2 = 0.0;
        for (int j = 0; j < dim; ++j) d2 += (c[j] - other[j]) * (c[j] - other[j]);
        if (d2 < separation * separation) {
          ok = false;
          break;
        }
      }
      if (ok) {
        centers.push_back(std::move(c));
      } else if (++attempts % 1000 == 0) {
        box *= 1.5;
      }
    }
  }
  return centers;
}

Dataset SampleMixture(const std::vector<std::vector<double>>& centers,
                      int per_class, uint64_t seed, uint64_t stream) {
  if (per_class < 1) throw InvalidArgumentError("GenGaussianMixture: per_class must be >= 1");
  const int num_classes = static_cast<int>(centers.size());
  const int dim = static_cast<int>(centers.front().size());
  Dataset ds;
  ds.num_classes = num_classes;
  ds.examples.reserve(static_cast<std::size_t>(num_classes) * per_class);
  Rng rng = MakeStream(seed, {kTagData, stream});
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int k = 0; k < num_classes; ++k) {
    for (int i = 0; i < per_class; ++i) {
      Example ex;
      ex.label = k;
      ex.features.resize(dim);
      for (int j = 0; j < dim; ++j) ex.features[j] = centers[k][j] + noise(rng);
      ds.examples.push_back(std::move(ex));
    }
  }
  return ds;
}

}  // namespace

Dataset GenGaussianMixture(int num_classes, int per_class, int dim,
                           double separation, uint64_t seed) {
  return SampleMixture(MixtureCenters(num_classes, dim, separation, seed),
                       per_class, seed, 1);
}

TrainTestSplit GenGaussianMixtureSplit(int num_classes, int train_per_class,
                                       int test_per_class, int dim,
                                       double separation, uint64_t seed) {
  const auto centers = MixtureCenters(num_classes, dim, separation, seed);
  return {SampleMixture(centers, train_per_class, seed, 1),
          SampleMixture(centers, test_per_class, seed, 2)};
}

Partition PartitionLabelSkew(const Dataset& ds, int num_clients, double q,
                             uint64_t seed) {
  if (num_clients < 1) throw InvalidArgumentError("PartitionLabelSkew: M must be >= 1");
  const double lo = num_clients == 1 ? 0.0 : 1.0 / num_clients;
  if (!(q >= lo - 1e-15 && q <= 1.0)) {
    throw InvalidArgumentError("PartitionLabelSkew: q must lie in [1/M, 1]");
  }
  if (ds.examples.size() < static_cast<std::size_t>(num_clients)) {
    throw InvalidArgumentError("PartitionLabelSkew: fewer examples than clients");
  }

  Partition part;
  part.shards.resize(num_clients);
  std::vector<int> owner(ds.size());
  Rng rng = MakeStream(seed, {kTagPartition});
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> other(0, std::max(0, num_clients - 2));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int home = ds.examples[i].label % num_clients;
    int m = home;
    if (num_clients > 1 && u01(rng) >= q) {
      m = other(rng);
      if (m >= home) ++m;
    }
    owner[i] = m;
  }

  std::vector<std::size_t> count(num_clients, 0);
  for (int m : owner) ++count[m];
  for (int m = 0; m < num_clients; ++m) {
    if (count[m] > 0) continue;
    std::ptrdiff_t pick = -1;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (ds.examples[i].label % num_clients == m && count[owner[i]] > 1) {
        pick = static_cast<std::ptrdiff_t>(i);
        break;
      }
    }
    if (pick < 0) {
      const int largest = static_cast<int>(
          std::max_element(count.begin(), count.end()) - count.begin());
      for (std::size_t i = ds.size(); i-- > 0;) {
        if (owner[i] == largest) {
          pick = static_cast<std::ptrdiff_t>(i);
          break;
        }
      }
    }
    --count[owner[pick]];
    owner[pick] = m;
    ++count[m];
  }

  for (std::size_t i = 0; i < ds.size(); ++i) part.shards[owner[i]].push_back(i);
  return part;
}

std::vector<Example> Gather(const Dataset& ds,
                            std::span<const std::size_t> indices) {
  std::vector<Example> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(ds.examples.at(i));
  return out;
}

std::vector<Example> SampleRoot(const Dataset& ds, std::size_t n_root,
                                uint64_t seed) {
  if (n_root < 1 || n_root > ds.size()) {
    throw InvalidArgumentError("SampleRoot: n_root must lie in [1, |dataset|]");
  }
  std::vector<std::size_t> idx(ds.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng = MakeStream(seed, {kTagRoot});
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < n_root; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n_root);
  return Gather(ds, idx);
}

std::vector<Example> DrawBatch(std::span<const Example> shard, int batch_size,
                               Rng& rng) {
  if (shard.empty()) throw InvalidArgumentError("DrawBatch: empty shard");
  if (batch_size < 1) throw InvalidArgumentError("DrawBatch: batch size must be >= 1");
  std::uniform_int_distribution<std::size_t> pick(0, shard.size() - 1);
  std::vector<Example> batch;
  batch.reserve(batch_size);
  for (int b = 0; b < batch_size; ++b) batch.push_back(shard[pick(rng)]);
  return batch;
}

Dataset LoadCsv(const std::string& path, int num_classes) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("LoadCsv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgumentError("LoadCsv: missing header in " + path);
  const std::size_t columns = std::count(line.begin(), line.end(), ',') + 1;
  if (columns < 2) throw InvalidArgumentError("LoadCsv: need at least one feature column");

  Dataset ds;
  int max_label = -1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != columns) {
      throw InvalidArgumentError("LoadCsv: " + path + ":" + std::to_string(line_no) +
                                 ": expected " + std::to_string(columns) + " columns");
    }
    Example ex;
    try {
      for (std::size_t j = 0; j + 1 < columns; ++j) ex.features.push_back(std::stod(cells[j]));
      std::size_t used = 0;
      ex.label = std::stoi(cells.back(), &used, 10);
      if (used != cells.back().size()) throw std::invalid_argument("label");
    } catch (const std::exception&) {
      throw InvalidArgumentError("LoadCsv: " + path + ":" + std::to_string(line_no) +
                                 ": malformed number");
    }
    max_label = std::max(max_label, ex.label);
    ds.examples.push_back(std::move(ex));
  }
  ds.num_classes = num_classes > 0 ? num_classes : max_label + 1;
  ds.Validate();
  return ds;
}

}  // namespace dragfl

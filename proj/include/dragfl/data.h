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

#ifndef DRAGFL_DATA_H_
#define DRAGFL_DATA_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dragfl/models.h"
#include "dragfl/rng.h"

namespace dragfl {

struct Dataset {
  std::vector<Example> examples;
  int num_classes = 0;

  std::size_t size() const { return examples.size(); }
  int FeatureDim() const;
  // Nonempty, labels in [0, num_classes), constant feature dimension.
  void Validate() const;
};

// Client shards as indices into a Dataset. Shards are disjoint, cover every
// index, and are each nonempty.
struct Partition {
  std::vector<std::vector<std::size_t>> shards;
};

// K isotropic unit-variance Gaussian blobs. Centers are pairwise exactly
// `separation` apart when K <= dim (scaled, randomly signed basis vectors);
// otherwise they are rejection-sampled to be at least that far apart.
Dataset GenGaussianMixture(int num_classes, int per_class, int dim,
                           double separation, uint64_t seed);

// Train set (identical to GenGaussianMixture with the same arguments) plus a
// held-out test set drawn from the same centers with an independent stream.
struct TrainTestSplit {
  Dataset train;
  Dataset test;
};
TrainTestSplit GenGaussianMixtureSplit(int num_classes, int train_per_class,
                                       int test_per_class, int dim,
                                       double separation, uint64_t seed);

// Label-skew split: an example with label l goes to client (l mod M) with
// probability q, otherwise to one of the other M-1 clients uniformly.
//
// A shard left empty receives one example whose label is in its home class;
// if no such example exists (fewer labels than clients) it takes one from
// the currently largest shard instead.
Partition PartitionLabelSkew(const Dataset& ds, int num_clients, double q,
                             uint64_t seed);

std::vector<Example> Gather(const Dataset& ds,
                            std::span<const std::size_t> indices);

// Uniform sample of n_root examples without replacement.
std::vector<Example> SampleRoot(const Dataset& ds, std::size_t n_root,
                                uint64_t seed);

// B examples drawn i.i.d. uniformly with replacement.
std::vector<Example> DrawBatch(std::span<const Example> shard, int batch_size,
                               Rng& rng);

// CSV with header row, columns f0..f{d-1},label. If num_classes <= 0 it is
// inferred as max label + 1.
Dataset LoadCsv(const std::string& path, int num_classes = 0);

}  // namespace dragfl

#endif  // DRAGFL_DATA_H_

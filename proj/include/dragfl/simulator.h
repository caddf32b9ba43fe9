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

#ifndef DRAGFL_SIMULATOR_H_
#define DRAGFL_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dragfl/attacks.h"
#include "dragfl/data.h"
#include "dragfl/drag_core.h"
#include "dragfl/models.h"
#include "dragfl/rng.h"
#include "dragfl/vecmath.h"

namespace dragfl {

enum class Aggregator { kFedAvg, kDrag, kDragByzantine };

std::string AggregatorName(Aggregator a);
Aggregator ParseAggregator(const std::string& name);

// Where the training and test data come from. With both CSV paths empty a
// Gaussian mixture is generated whose shape follows the model
// (input_dim features, num_classes blobs).
struct DataConfig {
  int per_class = 200;
  int test_per_class = 100;
  double separation = 4.5;
  std::string train_csv;
  std::string test_csv;

  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

struct ExperimentConfig {
  int M = 10;          // clients
  int S = 10;          // participants per round
  int U = 5;           // local steps
  int B = 20;          // batch size
  double eta = 0.1;    // stepsize
  int T_max = 100;
  std::optional<double> target_accuracy;
  Aggregator aggregator = Aggregator::kDrag;
  DragConfig drag;
  std::optional<AttackConfig> attack;
  std::optional<int> n_root;
  double q = 1.0;
  ModelSpec model{ModelKind::kLogistic, 20, 10, 0};
  uint64_t seed = 0;
  DataConfig data;

  // Checks everything that does not need the data; throws ConfigError.
  void Validate() const;
};

// Execution knobs that must not change results.
struct SimulationOptions {
  int num_threads = 1;
  // Retain the reference history and check the recursive reference against
  // its closed form every round (drag mode only).
  bool verify_closed_form = false;
};

struct ClientUpdate {
  int client_id = 0;
  ParamVector g;
  bool attacked = false;
};

struct RoundRecord {
  int round = 0;
  double train_loss = 0.0;     // full training set, after the update
  double test_accuracy = 0.0;  // test set, after the update
  double grad_norm_sq = 0.0;   // |grad f|^2 on the training set, at the broadcast model
  std::optional<double> mean_lambda;
  std::optional<double> max_lambda;
  std::vector<int> participants;
  std::vector<int> attackers;
  std::vector<double> attack_scales;  // parallel to attackers
  bool reference_degenerate = false;  // root reference vanished; plain mean used
  std::optional<double> closed_form_error;
};

// U steps theta <- theta - eta * mean_grad(batch) from `theta`; returns the
// model delta theta_U - theta.
ParamVector LocalSgd(const ModelSpec& spec, const ParamVector& theta,
                     std::span<const Example> shard, int local_steps,
                     int batch_size, double eta, Rng& rng);

// S distinct client ids in ascending order.
std::vector<int> SampleParticipants(int num_clients, int num_participants,
                                    Rng& rng);

// Server-side reference for the robust mode: local SGD on the root dataset.
ParamVector ComputeRootReference(const ModelSpec& spec, const ParamVector& theta,
                                 std::span<const Example> root, int local_steps,
                                 int batch_size, double eta, Rng& rng);

class Simulation {
 public:
  explicit Simulation(ExperimentConfig config, SimulationOptions options = {});
  Simulation(ExperimentConfig config, Dataset train, Dataset test,
             SimulationOptions options = {});

  // Executes one round and advances the global model.
  RoundRecord RunRound();

  // Rounds until T_max or the target accuracy is reached.
  std::vector<RoundRecord> Run();

  const ExperimentConfig& config() const { return config_; }
  const ParamVector& theta() const { return theta_; }
  int round() const { return round_; }
  const ReferenceState& reference() const { return reference_; }
  const Dataset& train() const { return train_; }
  const Dataset& test() const { return test_; }
  const Partition& partition() const { return partition_; }
  const std::vector<Example>& root() const { return root_; }
  // Client updates of the most recent round, ascending client id.
  const std::vector<ClientUpdate>& last_updates() const { return last_updates_; }

 private:
  void Setup();
  std::vector<int> RoundAttackers(const std::vector<int>& participants) const;

  ExperimentConfig config_;
  SimulationOptions options_;
  Dataset train_;
  Dataset test_;
  Partition partition_;
  std::vector<std::vector<Example>> shards_;
  std::vector<Example> root_;
  std::vector<int> fixed_attackers_;
  ParamVector theta_;
  ReferenceState reference_;
  std::vector<ClientUpdate> last_updates_;
  int round_ = 0;
};

std::vector<RoundRecord> RunExperiment(const ExperimentConfig& config,
                                       const SimulationOptions& options = {});

}  // namespace dragfl

#endif  // DRAGFL_SIMULATOR_H_

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

#include "dragfl/simulator.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iterator>
#include <numeric>
#include <thread>
#include <utility>

#include "dragfl/errors.h"

namespace dragfl {
namespace {

ExperimentConfig Validated(ExperimentConfig config) {
  config.Validate();
  return config;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// handled exactly once; results must be written to per-index slots.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::string AggregatorName(Aggregator a) {
  switch (a) {
    case Aggregator::kFedAvg:
      return "fedavg";
    case Aggregator::kDrag:
      return "drag";
    case Aggregator::kDragByzantine:
      return "drag_byzantine";
  }
  return "unknown";
}

Aggregator ParseAggregator(const std::string& name) {
  if (name == "fedavg") return Aggregator::kFedAvg;
  if (name == "drag") return Aggregator::kDrag;
  if (name == "drag_byzantine") return Aggregator::kDragByzantine;
  throw ConfigError("aggregator",
                    "expected fedavg, drag or drag_byzantine, got '" + name + "'");
}

void ExperimentConfig::Validate() const {
  if (M < 1) throw ConfigError("M", "must be >= 1");
  if (S < 1 || S > M) throw ConfigError("S", "must satisfy 1 <= S <= M");
  if (U < 1) throw ConfigError("U", "must be >= 1");
  if (B < 1) throw ConfigError("B", "must be >= 1");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta", "must be > 0");
  if (T_max < 0) throw ConfigError("T_max", "must be >= 0");
  if (target_accuracy && !(*target_accuracy >= 0.0 && *target_accuracy <= 1.0)) {
    throw ConfigError("target_accuracy", "must lie in [0, 1]");
  }
  const double q_lo = M == 1 ? 0.0 : 1.0 / M;
  if (!(q >= q_lo - 1e-15 && q <= 1.0)) {
    throw ConfigError("q", "must lie in [1/M, 1], got " + std::to_string(q));
  }
  drag.Validate();
  model.Validate();
  if (attack) {
    attack->Validate();
    if (attack->num_attackers > S) {
      throw ConfigError("attack.num_attackers", "must not exceed S");
    }
  }
  if (n_root && *n_root < 1) throw ConfigError("n_root", "must be >= 1");
  if (aggregator == Aggregator::kDragByzantine && !n_root) {
    throw ConfigError("n_root", "required by drag_byzantine");
  }
  if (data.train_csv.empty() != data.test_csv.empty()) {
    throw ConfigError("data", "train_csv and test_csv must be given together");
  }
  if (data.train_csv.empty()) {
    if (data.per_class < 1) throw ConfigError("data.per_class", "must be >= 1");
    if (data.test_per_class < 1) throw ConfigError("data.test_per_class", "must be >= 1");
    if (!(data.separation > 0.0)) throw ConfigError("data.separation", "must be > 0");
  }
}

ParamVector LocalSgd(const ModelSpec& spec, const ParamVector& theta,
                     std::span<const Example> shard, int local_steps,
                     int batch_size, double eta, Rng& rng) {
  if (shard.empty()) throw InvalidArgumentError("LocalSgd: empty shard");
  if (local_steps < 1) throw InvalidArgumentError("LocalSgd: U must be >= 1");
  ParamVector local = theta;
  for (int u = 0; u < local_steps; ++u) {
    const std::vector<Example> batch = DrawBatch(shard, batch_size, rng);
    local = Axpy(local, -eta, Grad(spec, local, batch));
  }
  return Axpy(local, -1.0, theta);
}

std::vector<int> SampleParticipants(int num_clients, int num_participants,
                                    Rng& rng) {
  if (num_participants < 0 || num_participants > num_clients) {
    throw InvalidArgumentError("SampleParticipants: need 0 <= S <= M");
  }
  std::vector<int> ids(num_clients);
  std::iota(ids.begin(), ids.end(), 0);
  for (int i = 0; i < num_participants; ++i) {
    std::uniform_int_distribution<int> pick(i, num_clients - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(num_participants);
  std::sort(ids.begin(), ids.end());
  return ids;
}

ParamVector ComputeRootReference(const ModelSpec& spec, const ParamVector& theta,
                                 std::span<const Example> root, int local_steps,
                                 int batch_size, double eta, Rng& rng) {
  if (root.empty()) throw InvalidArgumentError("ComputeRootReference: missing root dataset");
  return LocalSgd(spec, theta, root, local_steps, batch_size, eta, rng);
}

Simulation::Simulation(ExperimentConfig config, SimulationOptions options)
    : config_(Validated(std::move(config))),
      options_(options),
      theta_(config_.model.ParamDim()) {
  if (config_.data.train_csv.empty()) {
    auto split = GenGaussianMixtureSplit(
        config_.model.num_classes, config_.data.per_class,
        config_.data.test_per_class, config_.model.input_dim,
        config_.data.separation, config_.seed);
    train_ = std::move(split.train);
    test_ = std::move(split.test);
  } else {
    train_ = LoadCsv(config_.data.train_csv, config_.model.num_classes);
    test_ = LoadCsv(config_.data.test_csv, config_.model.num_classes);
  }
  Setup();
}

Simulation::Simulation(ExperimentConfig config, Dataset train, Dataset test,
                       SimulationOptions options)
    : config_(Validated(std::move(config))),
      options_(options),
      train_(std::move(train)),
      test_(std::move(test)),
      theta_(config_.model.ParamDim()) {
  Setup();
}

void Simulation::Setup() {
  train_.Validate();
  test_.Validate();
  for (const Dataset* ds : {&train_, &test_}) {
    if (ds->FeatureDim() != config_.model.input_dim) {
      throw ConfigError("model.input_dim", "does not match the data's feature count");
    }
    if (ds->num_classes > config_.model.num_classes) {
      throw ConfigError("model.num_classes", "smaller than the data's label range");
    }
  }
  if (config_.n_root && static_cast<std::size_t>(*config_.n_root) > train_.size()) {
    throw ConfigError("n_root", "exceeds the training set size");
  }
  if (train_.size() < static_cast<std::size_t>(config_.M)) {
    throw ConfigError("M", "more clients than training examples");
  }

  partition_ = PartitionLabelSkew(train_, config_.M, config_.q, config_.seed);
  shards_.clear();
  for (const auto& shard : partition_.shards) shards_.push_back(Gather(train_, shard));
  if (config_.n_root) root_ = SampleRoot(train_, *config_.n_root, config_.seed);

  if (config_.attack && config_.attack->fixed_identities &&
      config_.attack->num_attackers > 0) {
    std::vector<int> all(config_.M);
    std::iota(all.begin(), all.end(), 0);
    Rng rng = MakeStream(config_.attack->seed, {kTagAttackers});
    fixed_attackers_ = SelectAttackers(all, config_.attack->num_attackers, rng);
  }
  theta_ = InitParams(config_.model, config_.seed);
}

std::vector<int> Simulation::RoundAttackers(const std::vector<int>& participants) const {
  if (!config_.attack || config_.attack->num_attackers == 0) return {};
  if (config_.attack->fixed_identities) {
    std::vector<int> out;
    std::set_intersection(participants.begin(), participants.end(),
                          fixed_attackers_.begin(), fixed_attackers_.end(),
                          std::back_inserter(out));
    return out;
  }
  Rng rng = MakeStream(config_.attack->seed,
                       {kTagAttackers, static_cast<uint64_t>(round_)});
  return SelectAttackers(participants, config_.attack->num_attackers, rng);
}

RoundRecord Simulation::RunRound() {
  const ExperimentConfig& cfg = config_;
  const uint64_t t = static_cast<uint64_t>(round_);
  RoundRecord rec;
  rec.round = round_;
  rec.grad_norm_sq = [&] {
    const double n = Norm(Grad(cfg.model, theta_, train_.examples));
    return n * n;
  }();

  // Step 1: broadcast to a random subset.
  Rng part_rng = MakeStream(cfg.seed, {kTagParticipants, t});
  rec.participants = SampleParticipants(cfg.M, cfg.S, part_rng);
  rec.attackers = RoundAttackers(rec.participants);

  // Step 2: local SGD, then the attackers' scaling.
  const std::size_t n = rec.participants.size();
  std::vector<std::optional<ClientUpdate>> slots(n);
  std::vector<double> scales(n, 1.0);
  ParallelFor(n, options_.num_threads, [&](std::size_t i) {
    const int id = rec.participants[i];
    Rng rng = MakeStream(cfg.seed, {kTagClient, static_cast<uint64_t>(id), t});
    ParamVector g = LocalSgd(cfg.model, theta_, shards_[id], cfg.U, cfg.B,
                             cfg.eta, rng);
    const bool attacked =
        std::binary_search(rec.attackers.begin(), rec.attackers.end(), id);
    if (attacked) {
      const AttackConfig& atk = *cfg.attack;
      Rng arng = atk.redraw_scale
                     ? MakeStream(atk.seed, {kTagAttackScale, static_cast<uint64_t>(id), t})
                     : MakeStream(atk.seed, {kTagAttackScale, static_cast<uint64_t>(id)});
      AttackedUpdate a = ApplyAttack(g, atk, arng);
      g = std::move(a.g);
      scales[i] = a.scale;
    }
    slots[i] = ClientUpdate{id, std::move(g), attacked};
  });
  last_updates_.clear();
  std::vector<ParamVector> raw;
  raw.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]->attacked) rec.attack_scales.push_back(scales[i]);
    raw.push_back(slots[i]->g);
    last_updates_.push_back(std::move(*slots[i]));
  }

  // Step 3: reference direction, divergence, manipulation, aggregation.
  std::optional<ParamVector> delta;
  if (cfg.aggregator == Aggregator::kFedAvg) {
    delta = Mean(raw);
  } else {
    std::optional<ParamVector> r;
    if (cfg.aggregator == Aggregator::kDrag) {
      if (!reference_.initialized()) {
        reference_ = InitReference(raw, options_.verify_closed_form);
      } else if (options_.verify_closed_form) {
        std::vector<ParamVector> deltas;
        for (const auto& [k, d] : reference_.history) deltas.push_back(d);
        const ParamVector cf = ClosedFormReference(
            reference_.round0_updates, deltas, cfg.drag.alpha,
            static_cast<int>(deltas.size()));
        const double scale = std::max(Norm(cf), kDegenerateNorm);
        rec.closed_form_error = Norm(Axpy(*reference_.r, -1.0, cf)) / scale;
      }
      r = *reference_.r;
    } else {
      Rng root_rng = MakeStream(cfg.seed, {kTagRoot, t});
      r = ComputeRootReference(cfg.model, theta_, root_, cfg.U, cfg.B, cfg.eta,
                               root_rng);
    }

    std::vector<ModifiedUpdate> mods;
    mods.reserve(n);
    const bool robust = cfg.aggregator == Aggregator::kDragByzantine;
    if (robust && Norm(*r) <= kDegenerateNorm) {
      rec.reference_degenerate = true;
      delta = Mean(raw);
      rec.mean_lambda = 0.0;
      rec.max_lambda = 0.0;
    } else {
      double sum = 0.0, mx = 0.0;
      for (const ParamVector& g : raw) {
        const DivergenceScore s = DegreeOfDivergence(g, *r, cfg.drag.c);
        ModifiedUpdate m = robust ? ByzantineManipulate(g, *r, s.lambda)
                                  : DragManipulate(g, *r, s.lambda);
        m.score = s;
        sum += s.lambda;
        mx = std::max(mx, s.lambda);
        mods.push_back(std::move(m));
      }
      delta = AggregateModified(mods);
      rec.mean_lambda = sum / static_cast<double>(n);
      rec.max_lambda = mx;
    }
  }

  theta_ = Axpy(theta_, 1.0, *delta);
  if (cfg.aggregator == Aggregator::kDrag) {
    reference_ = UpdateReference(reference_, *delta, cfg.drag.alpha);
  }

  rec.train_loss = Loss(cfg.model, theta_, train_.examples);
  rec.test_accuracy = Accuracy(cfg.model, theta_, test_.examples);
  ++round_;
  return rec;
}

std::vector<RoundRecord> Simulation::Run() {
  std::vector<RoundRecord> records;
  while (round_ < config_.T_max) {
    records.push_back(RunRound());
    if (config_.target_accuracy &&
        records.back().test_accuracy >= *config_.target_accuracy) {
      break;
    }
  }
  return records;
}

std::vector<RoundRecord> RunExperiment(const ExperimentConfig& config,
                                       const SimulationOptions& options) {
  Simulation sim(config, options);
  return sim.Run();
}

}  // namespace dragfl

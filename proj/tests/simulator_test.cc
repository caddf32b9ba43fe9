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

#include <gtest/gtest.h>

#include <cmath>

#include "dragfl/errors.h"
#include "dragfl/report.h"

namespace dragfl {
namespace {

ExperimentConfig SmallConfig(Aggregator agg) {
  ExperimentConfig c;
  c.M = 6;
  c.S = 3;
  c.U = 3;
  c.B = 8;
  c.eta = 0.1;
  c.T_max = 12;
  c.aggregator = agg;
  c.q = 1.0;
  c.model = {ModelKind::kLogistic, 5, 6, 0};
  c.data.per_class = 20;
  c.data.test_per_class = 10;
  c.data.separation = 3.0;
  c.seed = 17;
  return c;
}

const ModelSpec kSpec{ModelKind::kLogistic, 3, 3, 0};

std::vector<Example> Shard() {
  return {{{1, 0, 0}, 0}, {{0, 1, 0.5}, 1}, {{0.2, -1, 1}, 2}, {{-1, 0.3, 0}, 0}};
}

TEST(LocalSgdTest, ZeroStepsizeGivesZeroUpdate) {
  Rng rng = MakeStream(1, {});
  const ParamVector g = LocalSgd(kSpec, ParamVector(12), Shard(), 5, 4, 0.0, rng);
  EXPECT_EQ(Norm(g), 0.0);
}

TEST(LocalSgdTest, SingleStepIsNegativeScaledGradient) {
  // Singleton shard: the batch is the shard regardless of the draw.
  const std::vector<Example> one{Shard()[1]};
  Rng rng = MakeStream(2, {});
  const ParamVector theta(12);
  const ParamVector g = LocalSgd(kSpec, theta, one, 1, 5, 0.3, rng);
  const ParamVector grad = Grad(kSpec, theta, one);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], -0.3 * grad[i], 1e-15);

  // Larger shard: replay the same stream to rebuild the drawn batch.
  Rng a = MakeStream(3, {}), b = MakeStream(3, {});
  const ParamVector g2 = LocalSgd(kSpec, theta, Shard(), 1, 4, 0.3, a);
  const ParamVector grad2 = Grad(kSpec, theta, DrawBatch(Shard(), 4, b));
  for (std::size_t i = 0; i < g2.size(); ++i) EXPECT_NEAR(g2[i], -0.3 * grad2[i], 1e-15);
}

TEST(LocalSgdTest, TwoStepsMatchUnrolledChain) {
  Rng a = MakeStream(4, {}), b = MakeStream(4, {});
  const ParamVector theta{0.1, -0.2, 0.3, 0, 0.5, 0.1, -0.4, 0.2, 0, 0.1, 0, -0.1};
  const ParamVector g = LocalSgd(kSpec, theta, Shard(), 2, 3, 0.2, a);
  ParamVector x = theta;
  for (int u = 0; u < 2; ++u) x = Axpy(x, -0.2, Grad(kSpec, x, DrawBatch(Shard(), 3, b)));
  const ParamVector expect = Axpy(x, -1.0, theta);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], expect[i], 1e-15);
  EXPECT_THROW(LocalSgd(kSpec, theta, std::vector<Example>{}, 1, 1, 0.1, a),
               InvalidArgumentError);
}

TEST(SampleParticipantsTest, Basics) {
  Rng rng = MakeStream(5, {});
  EXPECT_EQ(SampleParticipants(4, 4, rng), (std::vector<int>{0, 1, 2, 3}));
  for (int i = 0; i < 100; ++i) {
    const auto one = SampleParticipants(7, 1, rng);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_GE(one[0], 0);
    EXPECT_LT(one[0], 7);
  }
  EXPECT_THROW(SampleParticipants(3, 4, rng), InvalidArgumentError);
}

TEST(SampleParticipantsTest, InclusionProbabilityIsSOverM) {
  const int M = 12, S = 4, rounds = 10000;
  std::vector<int> hits(M, 0);
  for (int t = 0; t < rounds; ++t) {
    Rng rng = MakeStream(6, {kTagParticipants, static_cast<uint64_t>(t)});
    for (int id : SampleParticipants(M, S, rng)) ++hits[id];
  }
  const double p = static_cast<double>(S) / M;
  const double sd = std::sqrt(rounds * p * (1 - p));
  for (int h : hits) EXPECT_NEAR(h, rounds * p, 3 * sd);
}

TEST(RootReferenceTest, Cases) {
  Rng rng = MakeStream(7, {});
  EXPECT_EQ(Norm(ComputeRootReference(kSpec, ParamVector(12), Shard(), 3, 4, 0.0, rng)), 0.0);

  Rng a = MakeStream(8, {}), b = MakeStream(8, {});
  EXPECT_EQ(ComputeRootReference(kSpec, ParamVector(12), Shard(), 3, 4, 0.1, a),
            LocalSgd(kSpec, ParamVector(12), Shard(), 3, 4, 0.1, b));

  EXPECT_GT(Norm(ComputeRootReference(kSpec, ParamVector(12), Shard(), 1, 4, 0.1, rng)), 0.0);
  EXPECT_THROW(ComputeRootReference(kSpec, ParamVector(12), {}, 1, 4, 0.1, rng),
               InvalidArgumentError);
}

TEST(SimulationTest, DragWithZeroScaleTracksFedAvg) {
  ExperimentConfig drag = SmallConfig(Aggregator::kDrag);
  drag.drag.c = 0.0;
  Simulation a(drag), b(SmallConfig(Aggregator::kFedAvg));
  for (int t = 0; t < 8; ++t) {
    const RoundRecord ra = a.RunRound();
    const RoundRecord rb = b.RunRound();
    EXPECT_EQ(a.theta(), b.theta());
    EXPECT_EQ(ra.test_accuracy, rb.test_accuracy);
    EXPECT_EQ(*ra.max_lambda, 0.0);
    EXPECT_FALSE(rb.mean_lambda.has_value());
  }
}

TEST(SimulationTest, FullMomentumReferenceIsPreviousGlobalUpdate) {
  ExperimentConfig c = SmallConfig(Aggregator::kDrag);
  c.S = 1;
  c.drag.alpha = 1.0;
  Simulation sim(c);
  ParamVector prev = sim.theta();
  sim.RunRound();
  for (int t = 1; t < 6; ++t) {
    const ParamVector delta = Axpy(sim.theta(), -1.0, prev);
    const ParamVector r = *sim.reference().r;
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r[i], delta[i], 1e-14);
    prev = sim.theta();
    const RoundRecord rec = sim.RunRound();
    const auto& g = sim.last_updates().front().g;
    EXPECT_NEAR(*rec.mean_lambda, DegreeOfDivergence(g, r, c.drag.c).lambda, 1e-15);
  }
}

TEST(SimulationTest, IdenticalClientsGiveZeroDivergence) {
  // Every example is the same point, so every batch is identical whatever
  // the stream and all clients send the same update.
  Dataset ds;
  ds.num_classes = 3;
  for (int i = 0; i < 30; ++i) ds.examples.push_back({{0.5, -1.0, 2.0}, 0});
  ExperimentConfig c;
  c.M = 5;
  c.S = 5;
  c.U = 2;
  c.B = 4;
  c.T_max = 4;
  c.q = 0.2;
  c.aggregator = Aggregator::kDrag;
  c.drag = {0.7, 0.6};
  c.model = kSpec;
  Simulation sim(c, ds, ds);
  for (int t = 0; t < 4; ++t) {
    const ParamVector before = sim.theta();
    const RoundRecord rec = sim.RunRound();
    const auto& ups = sim.last_updates();
    for (const auto& u : ups) EXPECT_EQ(u.g, ups.front().g);
    // Identical clients share one lambda.
    EXPECT_NEAR(*rec.max_lambda, *rec.mean_lambda, 1e-15);
    if (t > 0) continue;
    // Round 0: the reference is the (common) update itself.
    EXPECT_LE(*rec.max_lambda, 1e-15);
    Rng rng = MakeStream(0, {});
    const ParamVector g = LocalSgd(kSpec, before, ds.examples, 2, 4, c.eta, rng);
    const ParamVector delta = Axpy(sim.theta(), -1.0, before);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(delta[i], g[i], 1e-14);
  }
}

TEST(SimulationTest, StoppingRules) {
  ExperimentConfig c = SmallConfig(Aggregator::kDrag);
  c.T_max = 0;
  EXPECT_TRUE(RunExperiment(c).empty());
  c.T_max = 10;
  c.target_accuracy = 0.0;
  EXPECT_EQ(RunExperiment(c).size(), 1u);
  c.target_accuracy.reset();
  EXPECT_EQ(RunExperiment(c).size(), 10u);
}

TEST(SimulationTest, DeterministicAndFreeOfLookahead) {
  for (Aggregator agg : {Aggregator::kFedAvg, Aggregator::kDrag, Aggregator::kDragByzantine}) {
    ExperimentConfig c = SmallConfig(agg);
    c.n_root = 20;
    AttackConfig atk;
    atk.num_attackers = 1;
    c.attack = atk;
    const auto a = RunExperiment(c);
    const auto b = RunExperiment(c);
    EXPECT_EQ(MetricsCsv(a), MetricsCsv(b));
    c.T_max = 5;
    const auto prefix = RunExperiment(c);
    const std::vector<RoundRecord> head(a.begin(), a.begin() + 5);
    EXPECT_EQ(MetricsCsv(prefix), MetricsCsv(head));
  }
}

TEST(SimulationTest, ParallelClientsDoNotChangeResults) {
  ExperimentConfig c = SmallConfig(Aggregator::kDrag);
  c.S = 6;
  SimulationOptions par;
  par.num_threads = 4;
  EXPECT_EQ(MetricsCsv(RunExperiment(c)), MetricsCsv(RunExperiment(c, par)));
}

TEST(SimulationTest, LambdaStaysInRange) {
  for (double cval : {0.1, 0.5, 1.0}) {
    ExperimentConfig c = SmallConfig(Aggregator::kDrag);
    c.drag.c = cval;
    for (const RoundRecord& r : RunExperiment(c)) {
      EXPECT_GE(*r.mean_lambda, 0.0);
      EXPECT_LE(*r.max_lambda, 2 * cval);
      EXPECT_LE(*r.mean_lambda, *r.max_lambda);
    }
  }
}

TEST(SimulationTest, RecursiveReferenceMatchesClosedFormDuringRun) {
  ExperimentConfig c = SmallConfig(Aggregator::kDrag);
  c.T_max = 30;
  SimulationOptions opts;
  opts.verify_closed_form = true;
  const auto records = RunExperiment(c, opts);
  EXPECT_FALSE(records[0].closed_form_error.has_value());
  for (std::size_t t = 1; t < records.size(); ++t) {
    ASSERT_TRUE(records[t].closed_form_error.has_value());
    EXPECT_LE(*records[t].closed_form_error, 1e-10);
  }
}

TEST(SimulationTest, AttackerIdentities) {
  ExperimentConfig c = SmallConfig(Aggregator::kFedAvg);
  c.M = c.S = 6;
  AttackConfig atk;
  atk.num_attackers = 2;
  c.attack = atk;
  const auto fixed = RunExperiment(c);
  for (const auto& r : fixed) {
    EXPECT_EQ(r.attackers, fixed[0].attackers);
    EXPECT_EQ(r.attack_scales.size(), 2u);
  }
  EXPECT_NE(fixed[0].attack_scales, fixed[1].attack_scales);

  c.attack->fixed_identities = false;
  c.attack->redraw_scale = false;
  const auto moving = RunExperiment(c);
  bool changed = false;
  for (const auto& r : moving) changed |= r.attackers != moving[0].attackers;
  EXPECT_TRUE(changed);
}

TEST(SimulationTest, FixedScaleAttackReversesUpdate) {
  ExperimentConfig c = SmallConfig(Aggregator::kFedAvg);
  c.M = c.S = 3;
  ExperimentConfig attacked = c;
  AttackConfig atk;
  atk.num_attackers = 3;
  atk.mode = AttackConfig::ScalarMode::kFixed;
  atk.fixed_scale = -1.0;
  attacked.attack = atk;
  Simulation clean(c), bad(attacked);
  const ParamVector theta0 = clean.theta();
  clean.RunRound();
  bad.RunRound();
  const ParamVector up = Axpy(clean.theta(), -1, theta0);
  const ParamVector down = Axpy(bad.theta(), -1, theta0);
  for (std::size_t i = 0; i < up.size(); ++i) EXPECT_NEAR(down[i], -up[i], 1e-15);
}

TEST(SimulationTest, ConfigValidation) {
  ExperimentConfig c = SmallConfig(Aggregator::kDrag);
  c.S = c.M + 1;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = SmallConfig(Aggregator::kDrag);
  c.q = 0.05;
  try {
    c.Validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "q");
  }
  c = SmallConfig(Aggregator::kDragByzantine);
  EXPECT_THROW(c.Validate(), ConfigError);
  c.n_root = 100000;
  EXPECT_THROW(Simulation{c}, ConfigError);
  c = SmallConfig(Aggregator::kFedAvg);
  AttackConfig atk;
  atk.num_attackers = c.S + 1;
  c.attack = atk;
  EXPECT_THROW(c.Validate(), ConfigError);
}

}  // namespace
}  // namespace dragfl

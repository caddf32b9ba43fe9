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

#include "dragfl/report.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dragfl/config.h"
#include "dragfl/errors.h"

namespace dragfl {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentConfig Tiny(Aggregator agg) {
  ExperimentConfig c;
  c.M = 4;
  c.S = 2;
  c.U = 2;
  c.B = 4;
  c.T_max = 6;
  c.aggregator = agg;
  c.model = {ModelKind::kLogistic, 3, 4, 0};
  c.data.per_class = 10;
  c.data.test_per_class = 5;
  return c;
}

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dragfl_report_" + name);
  fs::remove_all(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(MetricsCsvTest, HeaderAndLambdaColumns) {
  const auto fed = RunExperiment(Tiny(Aggregator::kFedAvg));
  const std::string text = MetricsCsv(fed);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "round,train_loss,test_accuracy,grad_norm_sq,mean_lambda,max_lambda,num_attackers");
  EXPECT_EQ(text.find('\r'), std::string::npos);
  std::istringstream in(text);
  const auto rows = ReadMetricsCsv(in);
  ASSERT_EQ(rows.size(), fed.size());
  for (const auto& r : rows) EXPECT_FALSE(r.mean_lambda.has_value());

  const auto drag = RunExperiment(Tiny(Aggregator::kDrag));
  std::istringstream in2(MetricsCsv(drag));
  for (const auto& r : ReadMetricsCsv(in2)) EXPECT_TRUE(r.max_lambda.has_value());
}

TEST(MetricsCsvTest, RealsRoundTripExactly) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> expo(-300, 300);
  std::vector<RoundRecord> records;
  for (int i = 0; i < 2000; ++i) {
    RoundRecord r;
    r.round = i;
    r.train_loss = std::pow(10.0, expo(rng)) * (rng() % 2 ? 1 : 1.0 / 3);
    r.test_accuracy = (rng() % 1000) / 999.0;
    r.grad_norm_sq = std::ldexp(static_cast<double>(rng() >> 11), -53);
    if (i % 2) {
      r.mean_lambda = r.test_accuracy / 7;
      r.max_lambda = 0.1 + r.grad_norm_sq;
    }
    r.attackers.resize(i % 4);
    records.push_back(r);
  }
  std::istringstream in(MetricsCsv(records));
  const auto rows = ReadMetricsCsv(in);
  ASSERT_EQ(rows.size(), records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].round, records[i].round);
    EXPECT_EQ(rows[i].train_loss, records[i].train_loss);
    EXPECT_EQ(rows[i].test_accuracy, records[i].test_accuracy);
    EXPECT_EQ(rows[i].grad_norm_sq, records[i].grad_norm_sq);
    EXPECT_EQ(rows[i].mean_lambda, records[i].mean_lambda);
    EXPECT_EQ(rows[i].max_lambda, records[i].max_lambda);
    EXPECT_EQ(rows[i].num_attackers, static_cast<int>(records[i].attackers.size()));
  }
}

TEST(RunToDirectoryTest, WritesBothFilesAndIsReproducible) {
  const fs::path dir = TempDir("ok");
  std::ostringstream log;
  ExperimentConfig c = Tiny(Aggregator::kDrag);
  c.target_accuracy = 0.99;
  ASSERT_EQ(RunToDirectory(c, dir, {}, log), 0) << log.str();
  ASSERT_TRUE(fs::exists(dir / kMetricsFile));
  ASSERT_TRUE(fs::exists(dir / kManifestFile));
  const std::string csv = Slurp(dir / kMetricsFile);

  const RunManifest m = RunManifest::FromJson(json::parse(Slurp(dir / kManifestFile)));
  EXPECT_LE(m.rounds_used, c.T_max);
  EXPECT_TRUE(m.outcome == "reached_target" || m.outcome == "exhausted_rounds");
  const std::size_t rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  EXPECT_EQ(rows, static_cast<std::size_t>(m.rounds_used));

  // The echoed config replays the run exactly.
  const fs::path again = TempDir("again");
  ASSERT_EQ(RunToDirectory(ConfigFromJson(m.config), again, {}, log), 0);
  EXPECT_EQ(Slurp(again / kMetricsFile), csv);
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST(RunToDirectoryTest, InvalidConfigWritesNothing) {
  const fs::path dir = TempDir("bad");
  ExperimentConfig c = Tiny(Aggregator::kDrag);
  c.S = c.M + 1;
  std::ostringstream log;
  EXPECT_NE(RunToDirectory(c, dir, {}, log), 0);
  EXPECT_FALSE(fs::exists(dir));
  EXPECT_NE(log.str().find("S"), std::string::npos);
}

TEST(RunToDirectoryTest, UnwritableDirectoryFails) {
  std::ostringstream log;
  EXPECT_EQ(RunToDirectory(Tiny(Aggregator::kFedAvg), "/proc/dragfl_cannot_write", {}, log), 1);
}

RunManifest Manifest(Aggregator agg, int rounds) {
  RunManifest m;
  m.config = ConfigToJson(Tiny(agg));
  m.rounds_used = rounds;
  m.outcome = "reached_target";
  return m;
}

TEST(CompareTest, IdenticalManifestsGiveUnitRatio) {
  const std::string report =
      CompareManifests({Manifest(Aggregator::kDrag, 40), Manifest(Aggregator::kDrag, 40)},
                       {"a.json", "b.json"});
  EXPECT_NE(report.find("1.000  a.json (baseline)"), std::string::npos) << report;
  EXPECT_NE(report.find("1.000  b.json"), std::string::npos) << report;
}

TEST(CompareTest, RatioAgainstFedAvg) {
  const std::string report =
      CompareManifests({Manifest(Aggregator::kDrag, 50), Manifest(Aggregator::kFedAvg, 100)},
                       {"drag.json", "fedavg.json"});
  EXPECT_NE(report.find("0.500  drag.json"), std::string::npos) << report;
  EXPECT_NE(report.find("1.000  fedavg.json (baseline)"), std::string::npos) << report;
}

TEST(CompareTest, MismatchedSettingsAreNamed) {
  RunManifest other = Manifest(Aggregator::kFedAvg, 10);
  other.config["seed"] = 99;
  try {
    CompareManifests({Manifest(Aggregator::kDrag, 5), other}, {"x.json", "y.json"});
    FAIL();
  } catch (const InvalidArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("'seed'"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("y.json"), std::string::npos);
  }
  EXPECT_THROW(CompareManifests({Manifest(Aggregator::kDrag, 5)}, {"x"}), InvalidArgumentError);
}

}  // namespace
}  // namespace dragfl

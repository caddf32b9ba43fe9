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

#ifndef DRAGFL_REPORT_H_
#define DRAGFL_REPORT_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dragfl/simulator.h"
#include "json.hpp"

namespace dragfl {

inline constexpr char kMetricsHeader[] =
    "round,train_loss,test_accuracy,grad_norm_sq,mean_lambda,max_lambda,num_attackers";
inline constexpr char kMetricsFile[] = "metrics.csv";
inline constexpr char kManifestFile[] = "manifest.json";

// One row per record, LF line endings, reals printed with 17 significant
// digits. Lambda columns are empty where the record carries no lambda.
void WriteMetricsCsv(std::ostream& out, const std::vector<RoundRecord>& records);
std::string MetricsCsv(const std::vector<RoundRecord>& records);

// Parsed CSV row.
struct MetricsRow {
  int round = 0;
  double train_loss = 0.0;
  double test_accuracy = 0.0;
  double grad_norm_sq = 0.0;
  std::optional<double> mean_lambda;
  std::optional<double> max_lambda;
  int num_attackers = 0;
};
std::vector<MetricsRow> ReadMetricsCsv(std::istream& in);

struct RunManifest {
  nlohmann::json config;
  std::string started_at;
  std::string finished_at;
  std::string outcome;  // reached_target | exhausted_rounds
  int rounds_used = 0;
  double final_test_accuracy = 0.0;

  nlohmann::json ToJson() const;
  static RunManifest FromJson(const nlohmann::json& j);
};

std::string Outcome(const ExperimentConfig& config,
                    const std::vector<RoundRecord>& records);

// Runs the experiment and writes metrics.csv and manifest.json into
// `out_dir`. The config and data are validated before anything is written.
// Returns 0 on success, 2 on a configuration error, 1 on other failures.
int RunToDirectory(const ExperimentConfig& config,
                   const std::filesystem::path& out_dir,
                   const SimulationOptions& options, std::ostream& log);

// Table of rounds_used per manifest with the ratio to the fedavg run (or to
// the first manifest when there is no fedavg run). All manifests must agree
// on model, data, seed and target_accuracy; throws InvalidArgumentError
// naming the first mismatch otherwise.
std::string CompareManifests(const std::vector<RunManifest>& manifests,
                             const std::vector<std::string>& labels);

}  // namespace dragfl

#endif  // DRAGFL_REPORT_H_

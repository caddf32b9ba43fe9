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

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dragfl/config.h"
#include "dragfl/errors.h"

namespace dragfl {
namespace {

using nlohmann::json;

std::string FormatReal(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string NowUtc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> OptionalReal(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

}  // namespace

void WriteMetricsCsv(std::ostream& out, const std::vector<RoundRecord>& records) {
  out << kMetricsHeader << '\n';
  for (const RoundRecord& r : records) {
    out << r.round << ',' << FormatReal(r.train_loss) << ','
        << FormatReal(r.test_accuracy) << ',' << FormatReal(r.grad_norm_sq) << ','
        << (r.mean_lambda ? FormatReal(*r.mean_lambda) : "") << ','
        << (r.max_lambda ? FormatReal(*r.max_lambda) : "") << ','
        << r.attackers.size() << '\n';
  }
}

std::string MetricsCsv(const std::vector<RoundRecord>& records) {
  std::ostringstream out;
  WriteMetricsCsv(out, records);
  return out.str();
}

std::vector<MetricsRow> ReadMetricsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw InvalidArgumentError("ReadMetricsCsv: unexpected header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = SplitCsvLine(line);
    if (cells.size() != 7) throw InvalidArgumentError("ReadMetricsCsv: expected 7 columns");
    MetricsRow row;
    row.round = std::stoi(cells[0]);
    row.train_loss = std::stod(cells[1]);
    row.test_accuracy = std::stod(cells[2]);
    row.grad_norm_sq = std::stod(cells[3]);
    row.mean_lambda = OptionalReal(cells[4]);
    row.max_lambda = OptionalReal(cells[5]);
    row.num_attackers = std::stoi(cells[6]);
    rows.push_back(row);
  }
  return rows;
}

json RunManifest::ToJson() const {
  return {{"config", config},
          {"started_at", started_at},
          {"finished_at", finished_at},
          {"outcome", outcome},
          {"rounds_used", rounds_used},
          {"final_test_accuracy", final_test_accuracy},
          {"metrics_csv", kMetricsFile}};
}

RunManifest RunManifest::FromJson(const json& j) {
  RunManifest m;
  try {
    m.config = j.at("config");
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    m.outcome = j.at("outcome").get<std::string>();
    m.rounds_used = j.at("rounds_used").get<int>();
    m.final_test_accuracy = j.value("final_test_accuracy", 0.0);
  } catch (const json::exception& e) {
    throw InvalidArgumentError(std::string("manifest: ") + e.what());
  }
  return m;
}

std::string Outcome(const ExperimentConfig& config,
                    const std::vector<RoundRecord>& records) {
  if (config.target_accuracy && !records.empty() &&
      records.back().test_accuracy >= *config.target_accuracy) {
    return "reached_target";
  }
  return "exhausted_rounds";
}

int RunToDirectory(const ExperimentConfig& config,
                   const std::filesystem::path& out_dir,
                   const SimulationOptions& options, std::ostream& log) {
  try {
    RunManifest manifest;
    manifest.config = ConfigToJson(config);
    manifest.started_at = NowUtc();
    Simulation sim(config, options);
    const std::vector<RoundRecord> records = sim.Run();
    manifest.finished_at = NowUtc();
    manifest.outcome = Outcome(config, records);
    manifest.rounds_used = static_cast<int>(records.size());
    manifest.final_test_accuracy = records.empty() ? 0.0 : records.back().test_accuracy;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      log << "error: cannot create " << out_dir.string() << ": " << ec.message() << "\n";
      return 1;
    }
    std::ofstream csv(out_dir / kMetricsFile, std::ios::binary);
    WriteMetricsCsv(csv, records);
    std::ofstream man(out_dir / kManifestFile, std::ios::binary);
    man << manifest.ToJson().dump(2) << '\n';
    if (!csv || !man) {
      log << "error: cannot write into " << out_dir.string() << "\n";
      return 1;
    }
    log << AggregatorName(config.aggregator) << ": " << manifest.rounds_used
        << " rounds, " << manifest.outcome << ", final test accuracy "
        << manifest.final_test_accuracy << "\n";
    return 0;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

std::string CompareManifests(const std::vector<RunManifest>& manifests,
                             const std::vector<std::string>& labels) {
  if (manifests.size() < 2) {
    throw InvalidArgumentError("compare: need at least two manifests");
  }
  const json& first = manifests.front().config;
  for (std::size_t i = 1; i < manifests.size(); ++i) {
    for (const char* key : {"model", "data", "seed", "target_accuracy"}) {
      if (manifests[i].config.value(key, json()) != first.value(key, json())) {
        throw InvalidArgumentError("compare: " + labels[i] + " differs from " +
                                   labels[0] + " in '" + key + "'");
      }
    }
  }

  std::size_t base = 0;
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    if (manifests[i].config.value("aggregator", "") == "fedavg") {
      base = i;
      break;
    }
  }
  const double base_rounds = manifests[base].rounds_used;
  std::ostringstream out;
  out << std::left << std::setw(16) << "aggregator" << std::setw(13) << "rounds_used"
      << std::setw(18) << "outcome" << "ratio  manifest\n";
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    const RunManifest& m = manifests[i];
    out << std::left << std::setw(16) << m.config.value("aggregator", "?")
        << std::setw(13) << m.rounds_used << std::setw(18) << m.outcome;
    if (base_rounds > 0) {
      out << std::fixed << std::setprecision(3) << m.rounds_used / base_rounds;
      out.unsetf(std::ios::fixed);
    } else {
      out << "n/a  ";
    }
    out << "  " << labels[i] << (i == base ? " (baseline)" : "") << "\n";
  }
  return out.str();
}

}  // namespace dragfl

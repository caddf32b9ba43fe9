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

// Command-line experiment runner.
//
//   dragfl run --config exp.json [--set key=value ...] --out runs/drag
//   dragfl compare runs/fedavg/manifest.json runs/drag/manifest.json

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dragfl/config.h"
#include "dragfl/errors.h"
#include "dragfl/report.h"

int main(int argc, char** argv) {
  CLI::App app{"Federated learning simulator with DRAG aggregation"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  int threads = 1;
  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--set", overrides, "Override a config key: key=value (dotted for nested)");
  run->add_option("--out", out_dir, "Output directory (default: $DRAGFL_OUT_DIR)");
  run->add_option("--threads", threads, "Worker threads for client training")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> manifests;
  CLI::App* compare = app.add_subcommand("compare", "Compare rounds used across runs");
  compare->add_option("manifests", manifests, "manifest.json files")->required()->expected(2, -1);

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    if (out_dir.empty()) {
      if (const char* env = std::getenv("DRAGFL_OUT_DIR")) out_dir = env;
    }
    if (out_dir.empty()) {
      std::cerr << "error: --out is required (or set DRAGFL_OUT_DIR)\n";
      return 2;
    }
    dragfl::ExperimentConfig config;
    try {
      config = dragfl::ParseConfig(config_path, overrides);
    } catch (const dragfl::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
    dragfl::SimulationOptions options;
    options.num_threads = threads;
    return dragfl::RunToDirectory(config, out_dir, options, std::cerr);
  }

  try {
    std::vector<dragfl::RunManifest> loaded;
    for (const std::string& path : manifests) {
      std::ifstream in(path);
      if (!in) throw dragfl::InvalidArgumentError("cannot open " + path);
      loaded.push_back(dragfl::RunManifest::FromJson(nlohmann::json::parse(in)));
    }
    std::cout << dragfl::CompareManifests(loaded, manifests);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

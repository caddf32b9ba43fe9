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

#ifndef DRAGFL_CONFIG_H_
#define DRAGFL_CONFIG_H_

#include <string>
#include <vector>

#include "dragfl/simulator.h"
#include "json.hpp"

namespace dragfl {

// JSON object whose keys are the ExperimentConfig field names; nested
// objects for drag, attack, model and data. Missing keys take defaults,
// unknown keys are rejected.
nlohmann::json ConfigToJson(const ExperimentConfig& config);
ExperimentConfig ConfigFromJson(const nlohmann::json& j);

// Applies `key=value` overrides (dotted keys reach into nested objects) to
// a config object. Values are parsed as JSON, falling back to a string.
void ApplyOverrides(nlohmann::json& j, const std::vector<std::string>& overrides);

// Reads the file (an empty file counts as {}), applies the overrides and
// validates. Throws ConfigError naming the offending field.
ExperimentConfig ParseConfig(const std::string& path,
                             const std::vector<std::string>& overrides = {});

}  // namespace dragfl

#endif  // DRAGFL_CONFIG_H_

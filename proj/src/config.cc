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

#include "dragfl/config.h"

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "dragfl/errors.h"

namespace dragfl {
namespace {

using nlohmann::json;

void RejectUnknown(const json& j, const std::set<std::string>& allowed,
                   const std::string& prefix) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(prefix + key, "unknown key");
    }
  }
}

json ExpectObject(const json& j, const std::string& field) {
  if (j.is_null()) return json::object();
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  return j;
}

template <typename T>
void Read(const json& j, const char* key, T& out, const std::string& prefix) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    const json& v = j.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(prefix + key, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(prefix + key, "expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(prefix + key, "expected a number");
    } else {
      if (!v.is_string()) throw ConfigError(prefix + key, "expected a string");
    }
    out = v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(prefix + key, e.what());
  }
}

}  // namespace

nlohmann::json ConfigToJson(const ExperimentConfig& c) {
  json j;
  j["M"] = c.M;
  j["S"] = c.S;
  j["U"] = c.U;
  j["B"] = c.B;
  j["eta"] = c.eta;
  j["T_max"] = c.T_max;
  j["target_accuracy"] = c.target_accuracy ? json(*c.target_accuracy) : json(nullptr);
  j["aggregator"] = AggregatorName(c.aggregator);
  j["drag"] = {{"c", c.drag.c}, {"alpha", c.drag.alpha}};
  if (c.attack) {
    const AttackConfig& a = *c.attack;
    json aj;
    aj["num_attackers"] = a.num_attackers;
    aj["scalar_mode"] = a.mode == AttackConfig::ScalarMode::kFixed ? "fixed" : "gaussian";
    aj["p"] = a.fixed_scale;
    aj["variance"] = a.variance;
    aj["seed"] = a.seed;
    aj["fixed_identities"] = a.fixed_identities;
    aj["redraw_scale"] = a.redraw_scale;
    j["attack"] = aj;
  } else {
    j["attack"] = nullptr;
  }
  j["n_root"] = c.n_root ? json(*c.n_root) : json(nullptr);
  j["q"] = c.q;
  j["model"] = {{"kind", ModelKindName(c.model.kind)},
                {"input_dim", c.model.input_dim},
                {"num_classes", c.model.num_classes},
                {"hidden_units", c.model.hidden_units}};
  j["seed"] = c.seed;
  j["data"] = {{"per_class", c.data.per_class},
               {"test_per_class", c.data.test_per_class},
               {"separation", c.data.separation},
               {"train_csv", c.data.train_csv},
               {"test_csv", c.data.test_csv}};
  return j;
}

ExperimentConfig ConfigFromJson(const nlohmann::json& in) {
  if (!in.is_object()) throw ConfigError("<root>", "expected a JSON object");
  RejectUnknown(in, {"M", "S", "U", "B", "eta", "T_max", "target_accuracy",
                     "aggregator", "drag", "attack", "n_root", "q", "model",
                     "seed", "data"},
                "");
  ExperimentConfig c;
  Read(in, "M", c.M, "");
  Read(in, "S", c.S, "");
  Read(in, "U", c.U, "");
  Read(in, "B", c.B, "");
  Read(in, "eta", c.eta, "");
  Read(in, "T_max", c.T_max, "");
  if (in.contains("target_accuracy") && !in["target_accuracy"].is_null()) {
    double t = 0.0;
    Read(in, "target_accuracy", t, "");
    c.target_accuracy = t;
  }
  if (in.contains("aggregator")) {
    std::string name;
    Read(in, "aggregator", name, "");
    c.aggregator = ParseAggregator(name);
  }
  if (in.contains("drag")) {
    const json d = ExpectObject(in["drag"], "drag");
    RejectUnknown(d, {"c", "alpha"}, "drag.");
    Read(d, "c", c.drag.c, "drag.");
    Read(d, "alpha", c.drag.alpha, "drag.");
  }
  if (in.contains("attack") && !in["attack"].is_null()) {
    const json a = ExpectObject(in["attack"], "attack");
    RejectUnknown(a, {"num_attackers", "scalar_mode", "p", "variance", "seed",
                      "fixed_identities", "redraw_scale"},
                  "attack.");
    AttackConfig atk;
    Read(a, "num_attackers", atk.num_attackers, "attack.");
    if (a.contains("scalar_mode")) {
      std::string mode;
      Read(a, "scalar_mode", mode, "attack.");
      if (mode == "fixed") {
        atk.mode = AttackConfig::ScalarMode::kFixed;
      } else if (mode == "gaussian") {
        atk.mode = AttackConfig::ScalarMode::kGaussian;
      } else {
        throw ConfigError("attack.scalar_mode", "expected 'fixed' or 'gaussian'");
      }
    }
    Read(a, "p", atk.fixed_scale, "attack.");
    Read(a, "variance", atk.variance, "attack.");
    Read(a, "seed", atk.seed, "attack.");
    Read(a, "fixed_identities", atk.fixed_identities, "attack.");
    Read(a, "redraw_scale", atk.redraw_scale, "attack.");
    c.attack = atk;
  }
  if (in.contains("n_root") && !in["n_root"].is_null()) {
    int n = 0;
    Read(in, "n_root", n, "");
    c.n_root = n;
  }
  Read(in, "q", c.q, "");
  if (in.contains("model")) {
    const json m = ExpectObject(in["model"], "model");
    RejectUnknown(m, {"kind", "input_dim", "num_classes", "hidden_units"}, "model.");
    if (m.contains("kind")) {
      std::string kind;
      Read(m, "kind", kind, "model.");
      c.model.kind = ParseModelKind(kind);
    }
    Read(m, "input_dim", c.model.input_dim, "model.");
    Read(m, "num_classes", c.model.num_classes, "model.");
    Read(m, "hidden_units", c.model.hidden_units, "model.");
  }
  Read(in, "seed", c.seed, "");
  if (in.contains("data")) {
    const json d = ExpectObject(in["data"], "data");
    RejectUnknown(d, {"per_class", "test_per_class", "separation", "train_csv", "test_csv"},
                  "data.");
    Read(d, "per_class", c.data.per_class, "data.");
    Read(d, "test_per_class", c.data.test_per_class, "data.");
    Read(d, "separation", c.data.separation, "data.");
    Read(d, "train_csv", c.data.train_csv, "data.");
    Read(d, "test_csv", c.data.test_csv, "data.");
  }
  c.Validate();
  return c;
}

void ApplyOverrides(nlohmann::json& j, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(ov, "override must look like key=value");
    }
    const std::string key = ov.substr(0, eq);
    const std::string text = ov.substr(eq + 1);
    json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = text;

    json* node = &j;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot - start);
      if (part.empty()) throw ConfigError(key, "malformed key");
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError(key, "parent is not an object");
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      node = &(*node)[part];
      start = dot + 1;
    }
  }
}

ExperimentConfig ParseConfig(const std::string& path,
                             const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j = json::object();
  if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
  }
  ApplyOverrides(j, overrides);
  return ConfigFromJson(j);
}

}  // namespace dragfl

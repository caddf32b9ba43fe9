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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "dragfl/config.h"
#include "dragfl/drag_core.h"
#include "dragfl/errors.h"
#include "dragfl/report.h"
#include "dragfl/simulator.h"
#include "dragfl/vecmath.h"

namespace py = pybind11;

namespace {

using dragfl::ParamVector;
using Vec = std::vector<double>;

std::vector<ParamVector> ToParams(const std::vector<Vec>& vs) {
  std::vector<ParamVector> out;
  out.reserve(vs.size());
  for (const Vec& v : vs) out.emplace_back(v);
  return out;
}

py::dict ScoreDict(const dragfl::DivergenceScore& s) {
  py::dict d;
  d["lambda"] = s.lambda;
  d["cosine"] = s.cosine;
  d["degenerate"] = s.degenerate;
  return d;
}

py::tuple ModifiedTuple(const dragfl::ModifiedUpdate& m) {
  return py::make_tuple(m.v.vec(), m.degenerate);
}

py::list RecordsToList(const std::vector<dragfl::RoundRecord>& records) {
  py::list out;
  for (const auto& r : records) {
    py::dict d;
    d["round"] = r.round;
    d["train_loss"] = r.train_loss;
    d["test_accuracy"] = r.test_accuracy;
    d["grad_norm_sq"] = r.grad_norm_sq;
    d["mean_lambda"] = r.mean_lambda ? py::cast(*r.mean_lambda) : py::none();
    d["max_lambda"] = r.max_lambda ? py::cast(*r.max_lambda) : py::none();
    d["participants"] = r.participants;
    d["attackers"] = r.attackers;
    d["attack_scales"] = r.attack_scales;
    d["reference_degenerate"] = r.reference_degenerate;
    out.append(d);
  }
  return out;
}

dragfl::ExperimentConfig ConfigFromString(const std::string& text) {
  return dragfl::ConfigFromJson(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "DRAG federated-learning simulator (C++ core)";

  py::register_exception<dragfl::Error>(m, "Error");
  py::register_exception<dragfl::DimensionError>(m, "DimensionError");
  py::register_exception<dragfl::ConfigError>(m, "ConfigError");

  m.def("inner", [](const Vec& a, const Vec& b) {
    return dragfl::Inner(ParamVector(a), ParamVector(b));
  });
  m.def("norm", [](const Vec& a) { return dragfl::Norm(ParamVector(a)); });
  m.def("cosine", [](const Vec& a, const Vec& b) {
    return dragfl::Cosine(ParamVector(a), ParamVector(b));
  });

  m.def("degree_of_divergence",
        [](const Vec& g, const Vec& r, double c) {
          return ScoreDict(dragfl::DegreeOfDivergence(ParamVector(g), ParamVector(r), c));
        },
        py::arg("g"), py::arg("r"), py::arg("c"));
  m.def("drag_manipulate",
        [](const Vec& g, const Vec& r, double lambda) {
          return ModifiedTuple(dragfl::DragManipulate(ParamVector(g), ParamVector(r), lambda));
        },
        py::arg("g"), py::arg("r"), py::arg("lam"),
        "Returns (v, degenerate).");
  m.def("byzantine_manipulate",
        [](const Vec& g, const Vec& r, double lambda) {
          return ModifiedTuple(
              dragfl::ByzantineManipulate(ParamVector(g), ParamVector(r), lambda));
        },
        py::arg("g"), py::arg("r"), py::arg("lam"),
        "Returns (v, degenerate).");
  m.def("update_reference",
        [](const Vec& r, const Vec& delta, double alpha) {
          dragfl::ReferenceState s;
          s.r = ParamVector(r);
          return dragfl::UpdateReference(s, ParamVector(delta), alpha).r->vec();
        },
        py::arg("r"), py::arg("delta"), py::arg("alpha"));
  m.def("closed_form_reference",
        [](const std::vector<Vec>& g0, const std::vector<Vec>& deltas, double alpha, int t) {
          const auto g = ToParams(g0);
          const auto d = ToParams(deltas);
          return dragfl::ClosedFormReference(g, d, alpha, t).vec();
        },
        py::arg("g0_updates"), py::arg("deltas"), py::arg("alpha"), py::arg("t"));

  m.def("normalize_config",
        [](const std::string& text) {
          return dragfl::ConfigToJson(ConfigFromString(text)).dump();
        },
        "Validates a JSON config and returns it with every default filled in.");
  m.def("run_experiment",
        [](const std::string& text, int threads) {
          dragfl::SimulationOptions opts;
          opts.num_threads = threads;
          std::vector<dragfl::RoundRecord> records;
          {
            py::gil_scoped_release release;
            records = dragfl::RunExperiment(ConfigFromString(text), opts);
          }
          return RecordsToList(records);
        },
        py::arg("config_json"), py::arg("threads") = 1);
  m.def("metrics_csv",
        [](const std::string& text, int threads) {
          dragfl::SimulationOptions opts;
          opts.num_threads = threads;
          py::gil_scoped_release release;
          return dragfl::MetricsCsv(dragfl::RunExperiment(ConfigFromString(text), opts));
        },
        py::arg("config_json"), py::arg("threads") = 1);
}

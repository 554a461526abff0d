// Copyright 2026 The geoqkd Authors.
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

// Python bindings. Scenarios and results cross the boundary as JSON text;
// the package wrapper converts them to and from dictionaries.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include <json.hpp>

#include "geoqkd/channel.hpp"
#include "geoqkd/config.hpp"
#include "geoqkd/errors.hpp"
#include "geoqkd/geometry.hpp"
#include "geoqkd/optimizer.hpp"
#include "geoqkd/pipeline.hpp"
#include "geoqkd/stats.hpp"
#include "geoqkd/tables.hpp"

namespace py = pybind11;
using namespace geoqkd;
using nlohmann::json;

namespace {

std::string data_dir_or_default(const std::string& dir) {
  return dir.empty() ? tables::default_data_dir() : dir;
}

std::string evaluate(const std::string& config_text, const std::string& data_dir) {
  const auto s = config::scenario_from_json(json::parse(config_text));
  py::gil_scoped_release release;
  if (s.abstract_channel) return config::result_to_json(pipeline::evaluate_point(s, nullptr), s).dump();
  const auto data = tables::DataSet::load(data_dir_or_default(data_dir));
  return config::result_to_json(pipeline::evaluate_point(s, &data), s).dump();
}

std::string optimize(const std::string& config_text, const std::string& data_dir,
                     std::uint64_t seed, int grid_points, int restarts) {
  const auto s = config::scenario_from_json(json::parse(config_text));
  pipeline::SearchConfig search;
  search.seed = seed;
  search.grid_points = grid_points;
  search.restarts = restarts;
  py::gil_scoped_release release;
  pipeline::OptimizationResult r;
  if (s.abstract_channel) {
    r = pipeline::optimize_key_rate(s, nullptr, search);
  } else {
    const auto data = tables::DataSet::load(data_dir_or_default(data_dir));
    r = pipeline::optimize_key_rate(s, &data, search);
  }
  json j = config::result_to_json(r.best, r.scenario);
  j["search"] = {{"evaluations", r.evaluations},
                 {"diagnostic", r.diagnostic},
                 {"parameters", pipeline::parameter_names(s.protocol.architecture)},
                 {"unit_point", r.unit}};
  return j.dump();
}

py::dict validate_data(const std::string& data_dir) {
  const auto d = tables::DataSet::load(data_dir_or_default(data_dir));
  d.atmosphere.validate();
  d.radiance.validate();
  py::dict out;
  out["atmosphere_rows"] = d.atmosphere.rows().size();
  out["radiance_rows"] = d.radiance.rows().size();
  out["cloud_cells"] = d.clouds.size();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-key feasibility for geostationary QKD downlinks";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

  m.def("evaluate_json", &evaluate, py::arg("config"), py::arg("data_dir") = "");
  m.def("optimize_json", &optimize, py::arg("config"), py::arg("data_dir") = "",
        py::arg("seed") = 1, py::arg("grid_points") = 3, py::arg("restarts") = 0);
  m.def("default_config_json",
        [] { return config::scenario_to_json(pipeline::Scenario{}).dump(); });
  m.def("validate_data", &validate_data, py::arg("data_dir") = "");

  m.def("fiber_bound", &pipeline::fiber_bound, py::arg("d_km"), py::arg("n_rep") = 0,
        py::arg("alpha_db_per_km") = 0.2, "Fiber capacity bound in bits per use.");
  m.def("repeater_bound", &pipeline::repeater_bound, py::arg("eta"), py::arg("n_rep") = 0);

  m.def(
      "slant_range",
      [](double zenith_deg, double ogs_altitude_km) {
        geometry::LinkGeometry g;
        g.ogs_altitude_km = ogs_altitude_km;
        return geometry::slant_range(geometry::deg2rad(zenith_deg), g);
      },
      py::arg("zenith_deg"), py::arg("ogs_altitude_km") = 0.0, "Line-of-sight distance in km.");
  m.def("encircled_energy", &channel::encircled_energy, py::arg("gamma_rad"), py::arg("a_R_m"),
        py::arg("lambda_nm"));
  m.def("airy_half_angle", &channel::airy_half_angle, py::arg("a_R_m"), py::arg("lambda_nm"));

  m.def(
      "binomial_bounds",
      [](std::int64_t n, double p, double eps) {
        const auto b = stats::binomial_bounds(n, p, eps);
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("n"), py::arg("p"), py::arg("eps"));
  m.def(
      "poisson_binomial_bounds",
      [](double n, double p_hat, double eps) {
        const auto b = stats::poisson_binomial_bounds(n, p_hat, eps);
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("n"), py::arg("p_hat"), py::arg("eps"));
}

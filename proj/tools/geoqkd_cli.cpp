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

// Command-line front end: evaluate, optimize, sweep, annual, bounds and
// validate-data. Exit status 0 on success, 1 on bad input, 2 on bad data.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <json.hpp>

#include "geoqkd/config.hpp"
#include "geoqkd/errors.hpp"
#include "geoqkd/optimizer.hpp"
#include "geoqkd/pipeline.hpp"
#include "geoqkd/tables.hpp"

using namespace geoqkd;
using nlohmann::json;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitData = 2;

struct Options {
  std::string config;
  std::string grid;
  std::string out;
  std::string data_dir;
  std::string clouds;
  std::uint64_t seed = 1;
  int threads = 0;
  bool strict_lp = false;
  bool auto_truncation = false;
  int grid_points = 3;
  int restarts = 0;
  int stride = 1;
  double d_km = 0.0;
  int n_rep = 0;
  double alpha = 0.2;
};

pipeline::Scenario scenario(const Options& o) {
  pipeline::Scenario s =
      o.config.empty() ? pipeline::Scenario{} : config::load_scenario(o.config);
  if (o.strict_lp) s.protocol.strict_lp = true;
  if (o.auto_truncation) s.auto_truncation = true;
  return s;
}

std::optional<tables::DataSet> data_for(const pipeline::Scenario& s, const Options& o) {
  if (s.abstract_channel) return std::nullopt;
  return tables::DataSet::load(o.data_dir);
}

pipeline::SearchConfig search(const Options& o) {
  pipeline::SearchConfig c;
  c.seed = o.seed;
  c.grid_points = o.grid_points;
  c.restarts = o.restarts;
  return c;
}

// Runs f with the output stream chosen by --out.
template <class F>
void with_output(const Options& o, F&& f) {
  if (o.out.empty()) {
    f(std::cout);
    return;
  }
  std::ofstream os(o.out);
  if (!os) throw InputError("cannot write '" + o.out + "'");
  f(os);
  if (!os) throw InputError("failed writing '" + o.out + "'");
}

void write_json(const Options& o, const json& j) {
  with_output(o, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void run_evaluate(const Options& o) {
  const auto s = scenario(o);
  const auto data = data_for(s, o);
  const auto r = pipeline::evaluate_point(s, data ? &*data : nullptr);
  write_json(o, config::result_to_json(r, s));
}

void run_optimize(const Options& o) {
  const auto s = scenario(o);
  const auto data = data_for(s, o);
  const auto r = pipeline::optimize_key_rate(s, data ? &*data : nullptr, search(o));
  json j = config::result_to_json(r.best, r.scenario);
  j["search"] = {{"evaluations", r.evaluations},
                 {"seed", o.seed},
                 {"diagnostic", r.diagnostic},
                 {"parameters", pipeline::parameter_names(s.protocol.architecture)},
                 {"unit_point", json::array()}};
  for (double u : r.unit) j["search"]["unit_point"].push_back(config::rounded(u));
  write_json(o, j);
}

void run_sweep(const Options& o) {
  const json base = o.config.empty() ? json::object() : config::load_json(o.config);
  const auto grid = pipeline::SweepGrid::from_json(config::load_json(o.grid));
  // Parse once so that configuration errors abort before any work.
  const auto s = config::scenario_from_json(base);
  std::optional<tables::DataSet> data;
  if (!s.abstract_channel) data = tables::DataSet::load(o.data_dir);
  const auto rows = pipeline::run_sweep(grid, base, data ? &*data : nullptr, search(o), o.threads);
  with_output(o, [&](std::ostream& os) { pipeline::write_sweep_table(os, grid, rows); });
}

void run_annual(const Options& o) {
  const auto s = scenario(o);
  if (s.abstract_channel) throw InputError("annual: needs a physical scenario");
  const auto data = tables::DataSet::load(o.data_dir);
  const auto cells = o.clouds.empty() ? data.clouds : tables::load_cloud_grid(o.clouds);
  const auto picked = pipeline::subsample_grid(cells, o.stride);
  const auto out = pipeline::annual_grid(picked, s, data, search(o), o.threads);
  with_output(o, [&](std::ostream& os) { pipeline::write_annual_table(os, out); });
}

void run_bounds(const Options& o) {
  const double bits = pipeline::fiber_bound(o.d_km, o.n_rep, o.alpha);
  write_json(o, {{"d_km", o.d_km},
                 {"repeaters", o.n_rep},
                 {"alpha_db_per_km", o.alpha},
                 {"bits_per_use", config::rounded(bits)}});
}

void run_validate(const Options& o) {
  const auto d = tables::DataSet::load(o.data_dir);
  d.atmosphere.validate();
  d.radiance.validate();
  std::cout << "atmosphere rows: " << d.atmosphere.rows().size() << '\n'
            << "radiance rows: " << d.radiance.rows().size() << '\n'
            << "cloud cells: " << d.clouds.size() << '\n'
            << "ok\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-key feasibility for geostationary QKD downlinks"};
  app.require_subcommand(1);
  Options o;
  o.data_dir = tables::default_data_dir();

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--data-dir", o.data_dir, "Directory with the data tables");
    sub->add_option("--out", o.out, "Output file (default: standard output)");
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Seed for random restarts");
    sub->add_option("--grid-points", o.grid_points, "Coarse grid points per parameter")
        ->check(CLI::Range(1, 20));
    sub->add_option("--restarts", o.restarts, "Extra seeded random starts")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_scenario = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--config", o.config, "Scenario file (JSON)");
    if (required) opt->required();
    sub->add_flag("--strict-lp", o.strict_lp, "Use the full decoy LP");
    sub->add_flag("--auto-truncation", o.auto_truncation, "Raise the photon cutoff until stable");
  };

  auto* evaluate = app.add_subcommand("evaluate", "Key length for one scenario");
  add_scenario(evaluate, true);
  add_common(evaluate);

  auto* optimize = app.add_subcommand("optimize", "Optimize protocol parameters");
  add_scenario(optimize, true);
  add_common(optimize);
  add_search(optimize);

  auto* sweep = app.add_subcommand("sweep", "Evaluate a parameter grid");
  sweep->add_option("--config", o.config, "Base scenario file (JSON)");
  sweep->add_option("--grid", o.grid, "Grid file (JSON)")->required();
  sweep->add_option("--threads", o.threads, "Worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber);
  add_common(sweep);
  add_search(sweep);

  auto* annual = app.add_subcommand("annual", "Cloud-weighted annual yield per cell");
  add_scenario(annual, false);
  annual->add_option("--clouds", o.clouds, "Cloud grid file (default: shipped grid)");
  annual->add_option("--stride", o.stride, "Use every n-th degree")->check(CLI::PositiveNumber);
  annual->add_option("--threads", o.threads, "Worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber);
  add_common(annual);
  add_search(annual);

  auto* bounds = app.add_subcommand("bounds", "Fiber capacity benchmarks");
  bounds->add_option("--d-km", o.d_km, "Fiber length in km")->required();
  bounds->add_option("--nrep", o.n_rep, "Number of repeaters");
  bounds->add_option("--alpha", o.alpha, "Attenuation in dB/km");
  bounds->add_option("--out", o.out, "Output file (default: standard output)");

  auto* validate = app.add_subcommand("validate-data", "Load and check the data tables");
  validate->add_option("--data-dir", o.data_dir, "Directory with the data tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*evaluate) run_evaluate(o);
    if (*optimize) run_optimize(o);
    if (*sweep) run_sweep(o);
    if (*annual) run_annual(o);
    if (*bounds) run_bounds(o);
    if (*validate) run_validate(o);
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}

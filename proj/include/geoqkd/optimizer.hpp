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

#pragma once

// Protocol-parameter search, sweeps, annual yield and the trusted-node link.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoqkd/pipeline.hpp"

namespace geoqkd::pipeline {

struct SearchConfig {
  int grid_points = 3;         // coarse points per dimension
  int max_evaluations = 400;   // local refinement budget
  double tolerance = 1e-6;     // simplex spread in the unit cube
  int starts = 3;              // refinements from the best distinct grid points
  int restarts = 0;            // extra refinements from seeded random starts
  std::uint64_t seed = 1;
  std::vector<double> warm_start;  // unit-cube point; skips the coarse grid when set
  void validate() const;
};

/// Names of the searched parameters for an architecture, in unit-cube order.
std::vector<std::string> parameter_names(Architecture a);

/// Maps a unit-cube point onto the scenario's protocol settings.
void apply_parameters(Scenario& s, const std::vector<double>& unit);

struct OptimizationResult {
  std::vector<double> unit;    // best point in the unit cube
  PointResult best;
  Scenario scenario;           // scenario at the best point
  int evaluations = 0;
  double grid_best = 0.0;      // best continuous key length on the coarse grid
  std::string diagnostic;
};

/// Coarse grid followed by Nelder-Mead on the continuous key length.
/// Only the signal and decoy intensities, their probabilities and the
/// architecture's basis, split or disclosure parameter are searched; the
/// third intensity is kept as given.
OptimizationResult optimize_key_rate(const Scenario& s, const tables::DataSet* data,
                                     const SearchConfig& search);

// --- sweeps --------------------------------------------------------------

struct SweepAxis {
  std::string name;  // dotted configuration key, e.g. "abstract.loss_db"
  double min = 0.0, max = 0.0;
  int steps = 2;
  bool log_scale = false;
  std::vector<double> values() const;
};

struct SweepGrid {
  std::vector<SweepAxis> axes;
  nlohmann::json overrides = nlohmann::json::object();
  bool optimize = true;
  void validate() const;
  static SweepGrid from_json(const nlohmann::json& j);
};

struct SweepRow {
  std::size_t index = 0;
  std::vector<double> axis_values;
  std::string status;  // key status, or the error text of a failed point
  bool failed = false;
  PointResult result;
  std::vector<double> unit;
};

/// Evaluates every grid point. Rows along the last axis are chained with warm
/// starts and distributed over threads, so the output is independent of the
/// thread count.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, const nlohmann::json& base_config,
                                const tables::DataSet* data, const SearchConfig& search,
                                int threads);

void write_sweep_table(std::ostream& os, const SweepGrid& grid, const std::vector<SweepRow>& rows);

// --- annual yield --------------------------------------------------------

inline constexpr double kNightFraction = 0.5;
inline constexpr double kSolarExcludedFraction = 1.0 / 6.0;
inline constexpr double kDayRegimeFraction = 1.0 / 9.0;

struct AnnualYieldCell {
  double latitude_deg = 0.0, longitude_deg = 0.0;
  double f_clear = 0.0, f_thin = 0.0, f_thick = 0.0;
  double zenith_deg = 0.0;
  double rates[3][4] = {};  // [cloud regime][illumination], bits per pulse
  double yield_bits = 0.0;  // per year
  std::string status = "ok";
};

/// Cloud-weighted yield for one cell; per-regime rates are optimized.
AnnualYieldCell annual_yield(const tables::CloudCell& cell, const Scenario& base,
                             const tables::DataSet& data, const SearchConfig& search);

/// Yield from precomputed rates.
double yield_from_rates(const AnnualYieldCell& cell, double source_rate_hz);

/// Every stride-th degree of the grid in both directions.
std::vector<tables::CloudCell> subsample_grid(const std::vector<tables::CloudCell>& cells,
                                              int stride);

std::vector<AnnualYieldCell> annual_grid(const std::vector<tables::CloudCell>& cells,
                                         const Scenario& base, const tables::DataSet& data,
                                         const SearchConfig& search, int threads);

void write_annual_table(std::ostream& os, const std::vector<AnnualYieldCell>& cells);

// --- trusted node --------------------------------------------------------

struct TwoStationResult {
  OptimizationResult a, b;
  double ell = 0.0;   // combined key, the smaller of the two links
  double rate = 0.0;  // per transmitted signal over both links
};

/// Splits the round budget evenly between two station links.
TwoStationResult two_station_key(const Scenario& a, const Scenario& b,
                                 const tables::DataSet* data, const SearchConfig& search);

/// Thread count for a request of 0 (automatic) or more.
int resolve_threads(int requested);

}  // namespace geoqkd::pipeline

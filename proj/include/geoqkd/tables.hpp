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

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "geoqkd/types.hpp"

namespace geoqkd::tables {

struct AtmosphereRow {
  Site site;
  double wavelength_nm;
  CloudRegime regime;
  double zenith_deg;
  double transmission;
};

/// Tabulated line-of-sight transmission per site, wavelength and sky condition.
class AtmosphereTable {
 public:
  static AtmosphereTable load(const std::string& path);
  static AtmosphereTable from_rows(std::vector<AtmosphereRow> rows);

  /// Interpolated transmission, linear in -ln(eta) against airmass sec(theta).
  /// Zenith angles outside the tabulated range are clamped to its ends.
  double transmission(Site site, double wavelength_nm, CloudRegime regime,
                      double theta_rad) const;

  /// Checks monotonicity in zenith angle and clear >= thin >= thick at every node.
  void validate() const;

  const std::vector<AtmosphereRow>& rows() const { return rows_; }

 private:
  using Key = std::tuple<Site, long, CloudRegime>;
  const std::vector<std::pair<double, double>>& curve(Site site, double wavelength_nm,
                                                      CloudRegime regime) const;
  std::vector<AtmosphereRow> rows_;
  std::map<Key, std::vector<std::pair<double, double>>> curves_;
};

struct RadianceRow {
  Site site;
  double wavelength_nm;
  Illumination illumination;
  double radiance;  // mW m^-2 nm^-1 sr^-1
};

/// Sky spectral radiance per site, wavelength and illumination scenario.
class RadianceTable {
 public:
  static RadianceTable load(const std::string& path);
  static RadianceTable from_rows(std::vector<RadianceRow> rows);

  double radiance(Site site, double wavelength_nm, Illumination illumination) const;

  /// Checks non-negativity and that the lunar value never exceeds the low-daylight one.
  void validate() const;

  const std::vector<RadianceRow>& rows() const { return rows_; }

 private:
  std::vector<RadianceRow> rows_;
};

/// One cell of the regional cloud climatology.
struct CloudCell {
  double latitude_deg;
  double longitude_deg;
  double f_clear;
  double f_thin;
  double f_thick;
};

std::vector<CloudCell> load_cloud_grid(const std::string& path);

/// All shipped data tables.
struct DataSet {
  AtmosphereTable atmosphere;
  RadianceTable radiance;
  std::vector<CloudCell> clouds;

  static DataSet load(const std::string& dir);
};

/// Directory baked in at build time, overridable with GEOQKD_DATA_DIR.
std::string default_data_dir();

}  // namespace geoqkd::tables

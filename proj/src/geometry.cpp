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

#include "geoqkd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geoqkd/errors.hpp"

namespace geoqkd::geometry {

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

void LinkGeometry::validate() const {
  if (!(std::abs(ogs_latitude_deg) <= 90.0)) throw InputError("geometry: |latitude| must be <= 90 deg");
  if (!(sat_altitude_km > 0.0)) throw InputError("geometry: satellite altitude must be positive");
  if (!(earth_radius_km > 0.0)) throw InputError("geometry: Earth radius must be positive");
  if (!(ogs_altitude_km >= 0.0 && ogs_altitude_km < sat_altitude_km)) {
    throw InputError("geometry: station altitude must lie in [0, satellite altitude)");
  }
}

double central_angle(const LinkGeometry& g) {
  g.validate();
  const double dlon = deg2rad(g.sat_longitude_deg - g.ogs_longitude_deg);
  const double c = std::cos(deg2rad(g.ogs_latitude_deg)) * std::cos(dlon);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double zenith_angle(const LinkGeometry& g) {
  const double psi = central_angle(g);
  const double u = g.r_sat_km() * std::cos(psi) - g.r_ogs_km();
  if (u <= 0.0) throw BelowHorizonError("geometry: satellite is at or below the horizon");
  return std::atan2(g.r_sat_km() * std::sin(psi), u);
}

double slant_range(double theta, const LinkGeometry& g) {
  g.validate();
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2 + 1e-12)) {
    throw InputError("geometry: zenith angle must lie in [0, pi/2]");
  }
  const double rs = g.r_sat_km(), ro = g.r_ogs_km(), c = std::cos(theta);
  return std::sqrt(rs * rs + ro * ro * (c * c - 1.0)) - ro * c;
}

double azimuth(const LinkGeometry& g) {
  g.validate();
  const double dlon = deg2rad(g.sat_longitude_deg - g.ogs_longitude_deg);
  const double phi = deg2rad(g.ogs_latitude_deg);
  const double rho_e = g.r_sat_km() * std::sin(dlon);
  const double rho_n = -g.r_sat_km() * std::sin(phi) * std::cos(dlon);
  if (std::abs(rho_e) < 1e-12 && std::abs(rho_n) < 1e-12) {
    throw InputError("geometry: azimuth undefined at the sub-satellite point");
  }
  return std::atan2(rho_n, rho_e);
}

double central_angle_for_zenith(double theta, const LinkGeometry& g) {
  const double s = slant_range(theta, g) * std::sin(theta) / g.r_sat_km();
  if (s > 1.0 + 1e-12) throw InputError("geometry: inconsistent zenith angle");
  return std::asin(std::min(s, 1.0));
}

double ground_separation(double theta, const LinkGeometry& g) {
  return 2.0 * g.r_ogs_km() * central_angle_for_zenith(theta, g);
}

}  // namespace geoqkd::geometry

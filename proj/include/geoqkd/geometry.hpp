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

namespace geoqkd::geometry {

/// Ground station and geostationary satellite positions on a spherical Earth.
struct LinkGeometry {
  double ogs_latitude_deg = 0.0;
  double ogs_longitude_deg = 0.0;
  double ogs_altitude_km = 0.0;
  double sat_longitude_deg = 0.0;
  double sat_altitude_km = 35786.0;
  double earth_radius_km = 6378.0;

  double r_ogs_km() const { return earth_radius_km + ogs_altitude_km; }
  double r_sat_km() const { return earth_radius_km + sat_altitude_km; }
  void validate() const;
};

/// Angle at the Earth's centre between the station and the sub-satellite point.
double central_angle(const LinkGeometry& g);

/// Local zenith angle of the satellite; throws BelowHorizonError when not visible.
double zenith_angle(const LinkGeometry& g);

/// Line-of-sight distance for a given zenith angle.
double slant_range(double theta, const LinkGeometry& g);

/// Azimuth measured counterclockwise from east through north.
double azimuth(const LinkGeometry& g);

/// Largest ground arc between two stations that both see the satellite at theta.
double ground_separation(double theta, const LinkGeometry& g);

/// Central angle of a station that sees the satellite at zenith angle theta.
double central_angle_for_zenith(double theta, const LinkGeometry& g);

double deg2rad(double deg);
double rad2deg(double rad);

}  // namespace geoqkd::geometry

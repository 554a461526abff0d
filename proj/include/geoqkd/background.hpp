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

#include <string_view>

#include "geoqkd/tables.hpp"
#include "geoqkd/types.hpp"

namespace geoqkd::background {

/// How the receiver field of view is chosen.
enum class FovMode { airy, smf, explicit_angle };

/// Sky background seen through the receiver's filters and gate.
struct NoiseScenario {
  double lambda_nm = wavelengths::ca_ii;
  double radiance = 0.0;               // mW m^-2 nm^-1 sr^-1
  double filter_bandwidth_ghz = 10.0;
  double gate_s = 1e-9;
  FovMode fov_mode = FovMode::smf;
  double fov_rad = 0.0;                // used with FovMode::explicit_angle

  void validate() const;
};

enum class DetectorType { snspd, apd };
enum class DetectorTier { a, b };

/// Single-photon detector figures of merit.
struct DetectorSpec {
  double eta_D = 0.95;
  double dark_count_rate_hz = 0.1;
  double p_ap = 0.0;

  /// Dark-click probability per gate.
  double p_dark(double gate_s) const;
  void validate() const;

  /// Tabulated detector for the given technology, tier and wavelength.
  static DetectorSpec lookup(DetectorType type, DetectorTier tier, double lambda_nm);
};

DetectorType parse_detector_type(std::string_view s);
DetectorTier parse_detector_tier(std::string_view s);

/// Filter width in nm for a bandwidth given in GHz.
double filter_bandwidth_nm(double lambda_nm, double bandwidth_ghz);

/// Field-of-view half-angle for the scenario and receiver aperture.
double fov_half_angle(const NoiseScenario& s, double a_R_m);

/// Solid angle of a cone with the given half-angle.
double solid_angle(double half_angle_rad);

/// Photon flux spectral density for a radiance in mW m^-2 nm^-1 sr^-1.
double photon_flux_density(double lambda_nm, double radiance);

/// Geometric-spectral-temporal acceptance of the receiver.
double acceptance(const NoiseScenario& s, double a_R_m);

/// Mean number of background photons per gate.
double mean_background_photons(const NoiseScenario& s, double a_R_m);

/// Per-detector noise-click probability of the two-detector active receiver.
double noise_click_probability_active(double nbar, double p_dark, double eta_R, double eta_D);

struct PassiveNoise {
  double p_Z;
  double p_X;
};
/// Per-detector noise-click probabilities when a fraction s goes to the X arm.
PassiveNoise noise_click_probability_passive(double nbar, double p_dark, double eta_R,
                                             double eta_D, double s);

/// Full-Moon scaling factor relative to the rural site.
double lunar_scaling_factor(Site site, double lambda_nm);

/// Lunar radiance at a site, scaled from the rural baseline.
double lunar_radiance(const tables::RadianceTable& table, Site site, double lambda_nm);

/// Radiance at which the active-receiver noise-click probability reaches target,
/// using the diffraction-limited solid angle pi (lambda / (pi a_R))^2.
double critical_radiance(double p_noise_target, double lambda_nm, double bandwidth_ghz,
                         double gate_s, double a_R_m, double eta_R, double eta_D, double p_dark);

}  // namespace geoqkd::background

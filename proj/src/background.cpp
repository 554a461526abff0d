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

#include "geoqkd/background.hpp"

#include <cmath>
#include <string>

#include "geoqkd/channel.hpp"
#include "geoqkd/errors.hpp"

namespace geoqkd::background {
namespace {

using constants::pi;

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

void require_probability(double p, const char* what) {
  require(p >= 0.0 && p <= 1.0, std::string(what) + " must lie in [0, 1]");
}

}  // namespace

void NoiseScenario::validate() const {
  require(lambda_nm > 0.0, "wavelength must be positive");
  require(radiance >= 0.0, "radiance must be non-negative");
  require(filter_bandwidth_ghz > 0.0, "filter bandwidth must be positive");
  require(gate_s > 0.0, "gate width must be positive");
  require(fov_mode != FovMode::explicit_angle || fov_rad > 0.0,
          "explicit field of view must be positive");
}

double DetectorSpec::p_dark(double gate_s) const {
  return -std::expm1(-dark_count_rate_hz * gate_s);
}

void DetectorSpec::validate() const {
  require(eta_D > 0.0 && eta_D <= 1.0, "detector efficiency must lie in (0, 1]");
  require(dark_count_rate_hz >= 0.0, "dark count rate must be non-negative");
  require_probability(p_ap, "afterpulse probability");
}

DetectorSpec DetectorSpec::lookup(DetectorType type, DetectorTier tier, double lambda_nm) {
  const bool b = tier == DetectorTier::b;
  if (type == DetectorType::snspd) {
    return b ? DetectorSpec{0.95, 0.1, 0.0} : DetectorSpec{0.85, 10.0, 0.0};
  }
  if (same_wavelength(lambda_nm, wavelengths::h_alpha)) {
    return b ? DetectorSpec{0.70, 10.0, 0.005} : DetectorSpec{0.50, 100.0, 0.02};
  }
  if (same_wavelength(lambda_nm, wavelengths::ca_ii)) {
    return b ? DetectorSpec{0.50, 10.0, 0.005} : DetectorSpec{0.40, 100.0, 0.02};
  }
  if (same_wavelength(lambda_nm, wavelengths::c_band)) {
    return b ? DetectorSpec{0.35, 50.0, 0.01} : DetectorSpec{0.25, 300.0, 0.03};
  }
  throw DataError("no APD specification at " + std::to_string(lambda_nm) + " nm");
}

DetectorType parse_detector_type(std::string_view s) {
  if (s == "snspd") return DetectorType::snspd;
  if (s == "apd") return DetectorType::apd;
  throw InputError("unknown detector type '" + std::string(s) + "'; expected snspd or apd");
}

DetectorTier parse_detector_tier(std::string_view s) {
  if (s == "A" || s == "a") return DetectorTier::a;
  if (s == "B" || s == "b") return DetectorTier::b;
  throw InputError("unknown detector tier '" + std::string(s) + "'; expected A or B");
}

double filter_bandwidth_nm(double lambda_nm, double bandwidth_ghz) {
  const double lambda_m = lambda_nm * 1e-9;
  return lambda_m * lambda_m / constants::c * bandwidth_ghz * 1e9 * 1e9;
}

double fov_half_angle(const NoiseScenario& s, double a_R_m) {
  switch (s.fov_mode) {
    case FovMode::airy:
      return channel::airy_half_angle(a_R_m, s.lambda_nm);
    case FovMode::smf:
      return channel::smf_half_angle(a_R_m, s.lambda_nm);
    case FovMode::explicit_angle:
      return s.fov_rad;
  }
  return 0.0;
}

double solid_angle(double half_angle_rad) {
  // 1 - cos(g) = 2 sin^2(g/2) avoids cancellation at micro-radian angles.
  const double h = std::sin(half_angle_rad / 2.0);
  return 4.0 * pi * h * h;
}

double photon_flux_density(double lambda_nm, double radiance) {
  return lambda_nm * 1e-9 * radiance * 1e6 / (2.0 * constants::hbar * constants::c);
}

double acceptance(const NoiseScenario& s, double a_R_m) {
  const double dlambda_m = filter_bandwidth_nm(s.lambda_nm, s.filter_bandwidth_ghz) * 1e-9;
  return dlambda_m * s.gate_s * solid_angle(fov_half_angle(s, a_R_m)) * a_R_m * a_R_m / 4.0;
}

double mean_background_photons(const NoiseScenario& s, double a_R_m) {
  s.validate();
  require(a_R_m > 0.0, "receiver aperture must be positive");
  return photon_flux_density(s.lambda_nm, s.radiance) * acceptance(s, a_R_m);
}

double noise_click_probability_active(double nbar, double p_dark, double eta_R, double eta_D) {
  require(nbar >= 0.0, "background photon number must be non-negative");
  require_probability(p_dark, "dark-click probability");
  require_probability(eta_R, "receiver transmission");
  require_probability(eta_D, "detector efficiency");
  // 1 - e^{-x}(1 - p) = (1 - e^{-x}) + e^{-x} p, written to keep tiny values exact.
  const double x = eta_R * eta_D * nbar / 2.0;
  return -std::expm1(-x) + std::exp(-x) * p_dark;
}

PassiveNoise noise_click_probability_passive(double nbar, double p_dark, double eta_R,
                                             double eta_D, double s) {
  require(s > 0.0 && s < 1.0, "split ratio must lie in (0, 1)");
  return {noise_click_probability_active((1.0 - s) * nbar, p_dark, eta_R, eta_D),
          noise_click_probability_active(s * nbar, p_dark, eta_R, eta_D)};
}

double lunar_scaling_factor(Site site, double lambda_nm) {
  if (site == Site::rural) return 1.0;
  const bool urban = site == Site::urban;
  if (same_wavelength(lambda_nm, wavelengths::h_alpha)) return urban ? 1.03 : 2.15;
  if (same_wavelength(lambda_nm, wavelengths::ca_ii)) return urban ? 1.17 : 2.86;
  if (same_wavelength(lambda_nm, wavelengths::c_band)) return urban ? 1.58 : 7.55;
  throw DataError("no lunar scaling factor at " + std::to_string(lambda_nm) + " nm");
}

double lunar_radiance(const tables::RadianceTable& table, Site site, double lambda_nm) {
  return table.radiance(Site::rural, lambda_nm, Illumination::night) *
         lunar_scaling_factor(site, lambda_nm);
}

double critical_radiance(double p_noise_target, double lambda_nm, double bandwidth_ghz,
                         double gate_s, double a_R_m, double eta_R, double eta_D, double p_dark) {
  require(p_noise_target > 0.0 && p_noise_target < 1.0, "target must lie in (0, 1)");
  require(eta_R > 0.0 && eta_D > 0.0, "efficiencies must be positive");
  if (p_noise_target < p_dark) {
    throw InputError("target noise probability lies below the dark-count floor");
  }
  const double nbar =
      -2.0 * (std::log1p(-p_noise_target) - std::log1p(-p_dark)) / (eta_R * eta_D);
  const double g = lambda_nm * 1e-9 / (pi * a_R_m);
  const double omega = pi * g * g;
  const double dlambda_m = filter_bandwidth_nm(lambda_nm, bandwidth_ghz) * 1e-9;
  const double gamma_r = dlambda_m * gate_s * omega * a_R_m * a_R_m / 4.0;
  return nbar / (photon_flux_density(lambda_nm, 1.0) * gamma_r);
}

}  // namespace geoqkd::background

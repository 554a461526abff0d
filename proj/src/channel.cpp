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

#include "geoqkd/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geoqkd/errors.hpp"

namespace geoqkd::channel {
namespace {

using constants::pi;

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

double wavenumber(double lambda_nm) { return 2.0 * pi / (lambda_nm * 1e-9); }

double secant(double theta) {
  require(theta >= 0.0 && theta < pi / 2.0, "zenith angle must lie in [0, 90) degrees");
  return 1.0 / std::cos(theta);
}

// Adaptive Gauss-Kronrod over the turbulent column, split where the profile
// changes character so each panel is smooth on its own scale.
template <class F>
double column_integral(const TurbulenceProfile& t, F f) {
  const double lo = t.ogs_height_m;
  const double hi = t.turbulent_top_km * 1000.0;
  if (!(hi > lo)) return 0.0;
  const std::array<double, 6> cuts{500.0, 2000.0, 6000.0, 10000.0, 14000.0, 18000.0};
  double a = lo, total = 0.0;
  auto panel = [&](double x0, double x1) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, x0, x1, 15, 1e-8);
  };
  for (double c : cuts) {
    if (c <= a || c >= hi) continue;
    total += panel(a, c);
    a = c;
  }
  total += panel(a, hi);
  return total;
}

}  // namespace

void TurbulenceProfile::validate() const {
  require(A >= 0.0 && B >= 0.0 && C >= 0.0, "turbulence coefficients must be non-negative");
  require(ogs_height_m >= 0.0, "ogs height must be non-negative");
  require(turbulent_top_km * 1000.0 > ogs_height_m,
          "top of turbulent layer must lie above the receiver");
  require(ground_wind_mps >= 0.0, "ground wind speed must be non-negative");
}

TurbulenceProfile TurbulenceProfile::rural() {
  return {4.5e-15, 9.0e-17, 2.0e-53, 5.0, 10.0, 0.4, 20.0};
}
TurbulenceProfile TurbulenceProfile::urban() {
  return {1.7e-14, 2.7e-16, 3.6e-53, 10.0, 10.0, 0.2, 20.0};
}
TurbulenceProfile TurbulenceProfile::coastal() {
  return {5.1e-14, 8.1e-16, 1.08e-52, 25.0, 10.0, 0.0, 20.0};
}
TurbulenceProfile TurbulenceProfile::for_site(Site site) {
  switch (site) {
    case Site::rural:
      return rural();
    case Site::urban:
      return urban();
    case Site::coastal:
      return coastal();
  }
  return urban();
}
TurbulenceProfile TurbulenceProfile::none() { return {0.0, 0.0, 0.0, 0.0, 10.0, 0.0, 20.0}; }

void OpticsConfig::validate() const {
  require(a_T_m > 0.0 && a_R_m > 0.0, "apertures must be positive");
  require(omega0_m >= 0.0, "beam waist must be non-negative");
  require(M2 >= 1.0, "beam quality factor must be at least 1");
  require(sigma_p_rad >= 0.0, "pointing jitter must be non-negative");
  require(eta0_smf > 0.0 && eta0_smf <= 1.0, "intrinsic coupling limit must lie in (0, 1]");
  require(fov_rad >= 0.0, "field of view must be non-negative");
  require(receiver_loss_db >= 0.0, "receiver loss must be non-negative");
  require(f_c_hz >= 0.0 && f_tc_hz >= 0.0, "AO bandwidths must be non-negative");
  require(f_c_hz == 0.0 || f_tc_hz > 0.0, "tip-tilt bandwidth must be positive when AO is on");
}

double LossBudget::to_db(double eta) { return -10.0 * std::log10(eta); }

LossBudget total_loss(double eta_geo, double eta_p, double eta_cpl, double eta_atm,
                      double eta_R, double eta_D) {
  for (double e : {eta_geo, eta_p, eta_cpl, eta_atm, eta_R, eta_D}) {
    require(e >= 0.0 && e <= 1.0, "loss factors must lie in [0, 1]");
  }
  return {eta_geo, eta_p, eta_cpl, eta_atm, eta_R, eta_D,
          eta_geo * eta_p * eta_cpl * eta_atm * eta_R * eta_D};
}

double diffraction_radius(const OpticsConfig& o, double rho_km, double lambda_nm) {
  require(rho_km >= 0.0, "slant range must be non-negative");
  const double w0 = o.omega0();
  const double z_r = pi * w0 * w0 / (lambda_nm * 1e-9);
  const double x = o.M2 * rho_km * 1000.0 / z_r;
  return w0 * std::sqrt(1.0 + x * x);
}

double cn2(double h_m, const TurbulenceProfile& t) {
  require(h_m >= 0.0, "height must be non-negative");
  return t.A * std::exp(-h_m / 100.0) + t.B * std::exp(-h_m / 1500.0) +
         t.C * std::pow(h_m, 10.0) * std::exp(-h_m / 1000.0);
}

double turbulence_T(const OpticsConfig& o, const TurbulenceProfile& t, double theta,
                    double lambda_nm, double rho_km) {
  const double sec = secant(theta);
  const double k = wavenumber(lambda_nm);
  const double h0 = t.ogs_height_m;
  const double span = t.turbulent_top_km * 1000.0 - h0;
  const double integral = column_integral(
      t, [&](double h) { return cn2(h, t) * std::pow((h - h0) / span, 5.0 / 3.0); });
  if (integral == 0.0) return 0.0;
  const double wd = diffraction_radius(o, rho_km, lambda_nm);
  const double rho = rho_km * 1000.0;
  return 4.35 * std::pow(2.0 * rho / (k * wd * wd), 5.0 / 6.0) * std::pow(k, 7.0 / 6.0) *
         std::pow(span, 5.0 / 6.0) * std::pow(sec, 11.0 / 6.0) * integral;
}

std::optional<double> fried_r0(const TurbulenceProfile& t, double theta, double lambda_nm) {
  const double sec = secant(theta);
  const double k = wavenumber(lambda_nm);
  const double integral = column_integral(t, [&](double h) { return cn2(h, t); });
  if (!(integral > 0.0)) return std::nullopt;
  return std::pow(0.423 * k * k * sec * integral, -3.0 / 5.0);
}

double wind_speed(double h_m, const TurbulenceProfile& t) {
  const double z = (h_m + t.site_altitude_km * 1000.0 - 12448.0) / 4800.0;
  return t.ground_wind_mps + 30.0 * std::exp(-z * z);
}

double greenwood_frequency(const TurbulenceProfile& t, double theta, double lambda_nm) {
  const double sec = secant(theta);
  const double k = wavenumber(lambda_nm);
  const double integral = column_integral(
      t, [&](double h) { return cn2(h, t) * std::pow(wind_speed(h, t), 5.0 / 3.0); });
  return std::pow(0.1022 * k * k * sec * integral, 3.0 / 5.0);
}

double tracking_greenwood_frequency(const TurbulenceProfile& t, double a_R_m, double theta,
                                    double lambda_nm) {
  require(a_R_m > 0.0, "receiver aperture must be positive");
  const double sec = secant(theta);
  const double k = wavenumber(lambda_nm);
  const double integral = column_integral(t, [&](double h) {
    const double v = wind_speed(h, t);
    return cn2(h, t) * v * v;
  });
  return 5.268e-2 * std::pow(a_R_m, -1.0 / 6.0) * k * std::sqrt(sec * integral);
}

double ao_corrected_r0(const OpticsConfig& o, const TurbulenceProfile& t, double theta,
                       double lambda_nm) {
  require(o.f_c_hz > 0.0 && o.f_tc_hz > 0.0, "AO correction needs positive bandwidths");
  const double fg = greenwood_frequency(t, theta, lambda_nm);
  const double ftg = tracking_greenwood_frequency(t, o.a_R_m, theta, lambda_nm);
  const double tt = pi / 2.0 * ftg / o.f_tc_hz;
  const double bracket = std::pow(fg / o.f_c_hz, 5.0 / 3.0) + tt * tt;
  if (bracket == 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(1.03, 3.0 / 5.0) * o.a_R_m * std::pow(bracket, -3.0 / 5.0);
}

std::optional<double> effective_r0(const OpticsConfig& o, const TurbulenceProfile& t,
                                   double theta, double lambda_nm) {
  const auto r0 = fried_r0(t, theta, lambda_nm);
  if (!r0 || o.f_c_hz == 0.0) return r0;
  return std::max(*r0, ao_corrected_r0(o, t, theta, lambda_nm));
}

double strehl(double a_R_m, std::optional<double> r0_m) {
  if (!r0_m || std::isinf(*r0_m)) return 1.0;
  require(*r0_m > 0.0, "Fried parameter must be positive");
  return std::pow(1.0 + std::pow(a_R_m / *r0_m, 5.0 / 3.0), -6.0 / 5.0);
}

double encircled_energy(double gamma_rad, double a_R_m, double lambda_nm) {
  require(gamma_rad >= 0.0, "field-of-view angle must be non-negative");
  if (gamma_rad == 0.0) return 0.0;
  const double u = pi * a_R_m * std::sin(gamma_rad) / (lambda_nm * 1e-9);
  const double j0 = std::cyl_bessel_j(0.0, u);
  const double j1 = std::cyl_bessel_j(1.0, u);
  return 1.0 - j0 * j0 - j1 * j1;
}

double airy_half_angle(double a_R_m, double lambda_nm) { return 1.22 * lambda_nm * 1e-9 / a_R_m; }

double smf_half_angle(double a_R_m, double lambda_nm) {
  return 2.24 * lambda_nm * 1e-9 / (pi * a_R_m);
}

double coupling_efficiency(const OpticsConfig& o, double S, double lambda_nm) {
  require(S > 0.0 && S <= 1.0, "Strehl ratio must lie in (0, 1]");
  if (o.coupling == Coupling::smf) return o.eta0_smf * S;
  const double gamma = o.fov_rad > 0.0 ? o.fov_rad : airy_half_angle(o.a_R_m, lambda_nm);
  return encircled_energy(gamma, o.a_R_m, lambda_nm) * S;
}

GeoPointing geometric_and_pointing(const OpticsConfig& o, double omega_t_m, double rho_km) {
  require(omega_t_m > 0.0, "beam radius must be positive");
  const double geo = -std::expm1(-o.a_R_m * o.a_R_m / (2.0 * omega_t_m * omega_t_m));
  const double jitter = o.sigma_p_rad * rho_km * 1000.0;
  const double w2 = omega_t_m * omega_t_m;
  return {geo, w2 / (w2 + 4.0 * jitter * jitter)};
}

double atmospheric_transmission(const tables::AtmosphereTable& table, Site site, double theta,
                                double lambda_nm, CloudRegime regime) {
  return table.transmission(site, lambda_nm, regime, theta);
}

LinkDiagnostics link_budget(const OpticsConfig& o, const TurbulenceProfile& t, double theta,
                            double lambda_nm, double rho_km, double eta_atm, double eta_D) {
  o.validate();
  t.validate();
  LinkDiagnostics d{};
  d.rho_km = rho_km;
  d.omega_d_m = diffraction_radius(o, rho_km, lambda_nm);
  d.T = turbulence_T(o, t, theta, lambda_nm, rho_km);
  d.omega_t_m = d.omega_d_m * std::sqrt(1.0 + d.T);
  d.r0_m = fried_r0(t, theta, lambda_nm);
  d.r0_eff_m = effective_r0(o, t, theta, lambda_nm);
  d.strehl = strehl(o.a_R_m, d.r0_eff_m);
  const auto gp = geometric_and_pointing(o, d.omega_t_m, rho_km);
  const double cpl = coupling_efficiency(o, d.strehl, lambda_nm);
  const double eta_R = std::pow(10.0, -o.receiver_loss_db / 10.0);
  d.budget = total_loss(gp.eta_geo, gp.eta_p, cpl, eta_atm, eta_R, eta_D);
  return d;
}

}  // namespace geoqkd::channel

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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "channel_oracles.hpp"
#include "geoqkd/channel.hpp"
#include "geoqkd/errors.hpp"
#include "geoqkd/geometry.hpp"

using namespace geoqkd;
using namespace geoqkd::channel;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCa = 854.445;

double deg(double d) { return d * kPi / 180.0; }

double rho_at(double theta_deg, double h_ogs_km = 0.0) {
  geometry::LinkGeometry g;
  g.ogs_altitude_km = h_ogs_km;
  return geometry::slant_range(deg(theta_deg), g);
}

oracle::Hv as_oracle(const TurbulenceProfile& t) {
  return {t.A, t.B, t.C, t.ground_wind_mps, t.ogs_height_m, t.site_altitude_km * 1000.0,
          t.turbulent_top_km * 1000.0};
}

OpticsConfig no_ao(double a_T, double a_R) {
  OpticsConfig o;
  o.a_T_m = a_T;
  o.a_R_m = a_R;
  o.f_c_hz = 0.0;
  return o;
}

}  // namespace

TEST_CASE("diffraction radius: waist, Rayleigh range and far field") {
  OpticsConfig o;
  o.a_T_m = 1.0;
  CHECK(diffraction_radius(o, 0.0, kCa) == doctest::Approx(0.25));
  o.M2 = 1.0;
  const double z_r_km = kPi * 0.25 * 0.25 / (kCa * 1e-9) / 1000.0;
  CHECK(diffraction_radius(o, z_r_km, kCa) == doctest::Approx(0.25 * std::sqrt(2.0)));
  o.M2 = 1.2;
  const double rho = rho_at(60.0);
  const double far = o.M2 * kCa * 1e-9 * rho * 1000.0 / (kPi * o.omega0());
  CHECK(std::abs(diffraction_radius(o, rho, kCa) / far - 1.0) < 1e-3);
}

TEST_CASE("Hufnagel-Valley profile") {
  const auto u = TurbulenceProfile::urban();
  CHECK(cn2(0.0, u) == doctest::Approx(u.A + u.B).epsilon(1e-15));
  CHECK(cn2(1e6, u) < 1e-40);
  // Term-by-term evaluation at 1 km for the urban coefficients.
  const double ref = 1.7e-14 * std::exp(-10.0) + 2.7e-16 * std::exp(-1000.0 / 1500.0) +
                     3.6e-53 * 1e30 * std::exp(-1.0);
  CHECK(cn2(1000.0, u) == doctest::Approx(ref).epsilon(1e-14));
  CHECK_THROWS_AS(cn2(-1.0, u), InputError);
}

TEST_CASE("turbulence broadening parameter") {
  auto o = no_ao(1.0, 1.5);
  const double rho = rho_at(60.0);
  CHECK(turbulence_T(o, TurbulenceProfile::none(), deg(60), kCa, rho) == 0.0);
  const double T = turbulence_T(o, TurbulenceProfile::coastal(), deg(60), kCa, rho);
  CHECK(T > 0.0);
  CHECK(T < 0.05);
  CHECK_THROWS_AS(turbulence_T(o, TurbulenceProfile::urban(), deg(90), kCa, rho), InputError);

  // Brute-force Simpson reconstruction of the weighted integral and prefactor.
  const auto c = TurbulenceProfile::coastal();
  const auto p = as_oracle(c);
  const long double span = p.top_m - p.h0;
  const long double I = oracle::simpson(
      [&](long double h) { return oracle::hv_cn2(h, p) * std::pow((h - p.h0) / span, 5.0L / 3.0L); },
      p.h0, p.top_m);
  const long double k = oracle::wavenumber(kCa);
  const long double wd = diffraction_radius(o, rho, kCa);
  const long double sec = 1.0L / std::cos(static_cast<long double>(deg(60)));
  const long double ref = 4.35L * std::pow(2.0L * rho * 1000.0L / (k * wd * wd), 5.0L / 6.0L) *
                          std::pow(k, 7.0L / 6.0L) * std::pow(span, 5.0L / 6.0L) *
                          std::pow(sec, 11.0L / 6.0L) * I;
  CHECK(std::abs(T / static_cast<double>(ref) - 1.0) < 1e-7);
}

TEST_CASE("Fried parameter") {
  CHECK_FALSE(fried_r0(TurbulenceProfile::none(), 0.0, kCa).has_value());
  const auto rural = TurbulenceProfile::rural();
  const double r0 = *fried_r0(rural, 0.0, 1550.027);
  const double ref = static_cast<double>(oracle::r0(as_oracle(rural), 0.0L, 1550.027L));
  CHECK(std::abs(r0 / ref - 1.0) < 1e-6);

  auto doubled = rural;
  doubled.A *= 2;
  doubled.B *= 2;
  doubled.C *= 2;
  CHECK(*fried_r0(doubled, 0.0, 1550.027) == doctest::Approx(r0 * std::pow(2.0, -0.6)));
  CHECK(*fried_r0(rural, deg(60), 1550.027) < r0);
  CHECK(*fried_r0(TurbulenceProfile::urban(), 0.0, 1550.027) < r0);
}

TEST_CASE("adaptive-optics corrected coherence length") {
  const auto u = TurbulenceProfile::urban();
  OpticsConfig o;
  o.f_c_hz = 130.0;
  o.f_tc_hz = 60.0;
  o.a_R_m = 1.5;
  const double th = deg(60);
  const auto p = as_oracle(u);
  const double fg = greenwood_frequency(u, th, kCa);
  const double ftg = tracking_greenwood_frequency(u, 1.5, th, kCa);
  CHECK(std::abs(fg / static_cast<double>(oracle::greenwood(p, th, kCa)) - 1.0) < 1e-6);
  CHECK(std::abs(ftg / static_cast<double>(oracle::tracking_greenwood(p, 1.5, th, kCa)) - 1.0) <
        1e-6);
  const double tt = kPi / 2.0 * ftg / 60.0;
  const double ref =
      std::pow(1.03, 0.6) * 1.5 * std::pow(std::pow(fg / 130.0, 5.0 / 3.0) + tt * tt, -0.6);
  CHECK(ao_corrected_r0(o, u, th, kCa) == doctest::Approx(ref).epsilon(1e-12));

  const double small = ao_corrected_r0(o, u, th, kCa);
  o.a_R_m = 3.0;
  // Near-linear growth: exactly 2 if the Greenwood term dominated, 2^1.2 if
  // tip-tilt did, since the tracking frequency falls as a_R^(-1/6).
  const double ratio = ao_corrected_r0(o, u, th, kCa) / small;
  CHECK(ratio >= 2.0);
  CHECK(ratio <= std::pow(2.0, 1.2));
  CHECK(ratio < 2.1);

  o.f_c_hz = 1e12;
  o.f_tc_hz = 1e12;
  CHECK(ao_corrected_r0(o, u, th, kCa) > 1e6);
  o.f_c_hz = 0.0;
  CHECK_THROWS_AS(ao_corrected_r0(o, u, th, kCa), InputError);
  CHECK(*effective_r0(o, u, th, kCa) == *fried_r0(u, th, kCa));
}

TEST_CASE("Strehl ratio") {
  CHECK(strehl(1.0, std::nullopt) == 1.0);
  CHECK(strehl(1e-9, 1.0) == doctest::Approx(1.0));
  CHECK(strehl(0.3, 0.3) == doctest::Approx(std::pow(2.0, -1.2)).epsilon(1e-14));
  CHECK(strehl(0.3, 0.3) == doctest::Approx(0.4353).epsilon(1e-4));
  double prev = 1.0;
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    const double s = strehl(x, 1.0);
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("Airy encircled energy") {
  CHECK(encircled_energy(0.0, 1.0, kCa) == 0.0);
  const double L = encircled_energy(airy_half_angle(1.5, kCa), 1.5, kCa);
  CHECK(std::abs(L - 0.838) < 1e-3);
  CHECK(encircled_energy(1e-3, 1.5, kCa) > 0.999);
  for (double u : {0.5, 2.0, 3.8317, 7.0}) {
    const double gamma = std::asin(u * kCa * 1e-9 / (kPi * 1.0));
    const long double j0 = oracle::bessel_j(0, u), j1 = oracle::bessel_j(1, u);
    CHECK(std::abs(encircled_energy(gamma, 1.0, kCa) - static_cast<double>(1.0L - j0 * j0 - j1 * j1)) <
          1e-10);
  }
}

TEST_CASE("coupling efficiency") {
  OpticsConfig o;
  CHECK(coupling_efficiency(o, 1.0, kCa) == doctest::Approx(0.786));
  CHECK(coupling_efficiency(o, 0.5, kCa) == doctest::Approx(0.393));
  o.coupling = Coupling::fs;
  CHECK(coupling_efficiency(o, 1.0, kCa) == doctest::Approx(0.838).epsilon(1e-3));
  CHECK_THROWS_AS(coupling_efficiency(o, 0.0, kCa), InputError);
}

TEST_CASE("geometric collection and pointing") {
  OpticsConfig o;
  o.a_R_m = 0.5;
  auto gp = geometric_and_pointing(o, 0.5, 40000.0);
  CHECK(gp.eta_geo == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-14));
  CHECK(gp.eta_geo == doctest::Approx(0.3935).epsilon(1e-4));
  CHECK(geometric_and_pointing(o, 1e-3, 40000.0).eta_geo == doctest::Approx(1.0));
  o.sigma_p_rad = 0.0;
  CHECK(geometric_and_pointing(o, 10.0, 40000.0).eta_p == 1.0);
  o.sigma_p_rad = 1e-6;
  // sigma * rho = 40 m against a 40 m beam.
  CHECK(geometric_and_pointing(o, 40.0, 40000.0).eta_p == doctest::Approx(0.2));
}

TEST_CASE("atmospheric table interpolation") {
  std::vector<tables::AtmosphereRow> rows;
  for (auto r : {CloudRegime::clear, CloudRegime::thin, CloudRegime::thick}) {
    const double extra = r == CloudRegime::clear ? 0.0 : (r == CloudRegime::thin ? 0.65 : 2.45);
    for (double z : {0.0, 30.0, 60.0, 80.0}) {
      rows.push_back({Site::urban, kCa, r, z, std::exp(-(0.19 + extra) / std::cos(deg(z)))});
    }
  }
  const auto table = tables::AtmosphereTable::from_rows(rows);
  CHECK_NOTHROW(table.validate());
  CHECK(atmospheric_transmission(table, Site::urban, deg(60), kCa, CloudRegime::clear) ==
        rows[2].transmission);
  // The synthetic data is exactly log-linear in airmass, so interpolation is exact.
  CHECK(atmospheric_transmission(table, Site::urban, deg(45), kCa, CloudRegime::thin) ==
        doctest::Approx(std::exp(-0.84 / std::cos(deg(45)))).epsilon(1e-12));
  CHECK(atmospheric_transmission(table, Site::urban, deg(85), kCa, CloudRegime::clear) ==
        rows[3].transmission);
  double prev = 1.0;
  for (double z = 0; z <= 80; z += 5) {
    const double e = atmospheric_transmission(table, Site::urban, deg(z), kCa, CloudRegime::thick);
    CHECK(e <= prev);
    prev = e;
  }
  CHECK_THROWS_AS(atmospheric_transmission(table, Site::rural, 0.0, kCa, CloudRegime::clear),
                  DataError);
}

TEST_CASE("total loss") {
  const auto unit = total_loss(1, 1, 1, 1, 1, 1);
  CHECK(unit.eta_sys == 1.0);
  CHECK(unit.total_db() == doctest::Approx(0.0));
  CHECK(std::pow(10.0, -0.4) == doctest::Approx(0.3981).epsilon(1e-4));
  const auto b = total_loss(0.01, 0.9, 0.3, 0.7, std::pow(10.0, -0.4), 0.95);
  const double sum = LossBudget::to_db(b.eta_geo) + LossBudget::to_db(b.eta_p) +
                     LossBudget::to_db(b.eta_cpl) + LossBudget::to_db(b.eta_atm) +
                     LossBudget::to_db(b.eta_R) + LossBudget::to_db(b.eta_D);
  CHECK(std::abs(sum - b.total_db()) < 1e-9);
  CHECK_THROWS_AS(total_loss(1.2, 1, 1, 1, 1, 1), InputError);
}

TEST_CASE("receiver aperture sweep without AO nearly cancels") {
  const auto u = TurbulenceProfile::urban();
  const double th = deg(60);
  const double rho = rho_at(60.0, u.site_altitude_km);
  const auto small = link_budget(no_ao(0.75, 0.4), u, th, kCa, rho, 1.0, 1.0);
  const auto large = link_budget(no_ao(0.75, 2.0), u, th, kCa, rho, 1.0, 1.0);
  const double dgeo = LossBudget::to_db(small.budget.eta_geo) - LossBudget::to_db(large.budget.eta_geo);
  const double dcpl = LossBudget::to_db(large.budget.eta_cpl) - LossBudget::to_db(small.budget.eta_cpl);
  const double dtot = small.budget.total_db() - large.budget.total_db();
  CHECK(dgeo > 13.0);
  CHECK(dgeo < 15.0);
  CHECK(std::abs(dcpl - 13.7) < 1.0);
  CHECK(std::abs(dtot) < 1.5);

  // With strong AO the same sweep improves the total loss monotonically.
  double prev = 1e9;
  for (double aR = 0.4; aR <= 2.0 + 1e-9; aR += 0.2) {
    auto o = no_ao(0.75, aR);
    o.f_c_hz = 500.0;
    const double tot = link_budget(o, u, th, kCa, rho, 1.0, 1.0).budget.total_db();
    CHECK(tot < prev);
    prev = tot;
  }
}

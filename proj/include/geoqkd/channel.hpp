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

#include <optional>

#include "geoqkd/tables.hpp"
#include "geoqkd/types.hpp"

namespace geoqkd::channel {

/// Hufnagel-Valley turbulence profile and wind model for one site.
struct TurbulenceProfile {
  double A = 1.7e-14;              // m^(-2/3)
  double B = 2.7e-16;              // m^(-2/3)
  double C = 3.6e-53;              // m^(-32/3)
  double ground_wind_mps = 10.0;
  double ogs_height_m = 10.0;      // receiver height above ground
  double site_altitude_km = 0.2;   // ground altitude above sea level
  double turbulent_top_km = 20.0;  // measured above ground

  void validate() const;

  static TurbulenceProfile rural();
  static TurbulenceProfile urban();
  static TurbulenceProfile coastal();
  static TurbulenceProfile for_site(Site site);
  /// Turbulence-free profile.
  static TurbulenceProfile none();
};

/// Transmitter and receiver optics.
struct OpticsConfig {
  double a_T_m = 0.75;
  double omega0_m = 0.0;  // 0 selects a_T / 4
  double M2 = 1.2;
  double a_R_m = 1.5;
  double sigma_p_rad = 0.5e-6;
  Coupling coupling = Coupling::smf;
  double eta0_smf = 0.786;
  double fov_rad = 0.0;  // free-space FOV half-angle; 0 selects the Airy angle
  double receiver_loss_db = 4.0;
  double f_c_hz = 130.0;  // 0 disables adaptive optics
  double f_tc_hz = 60.0;

  double omega0() const { return omega0_m > 0.0 ? omega0_m : a_T_m / 4.0; }
  void validate() const;
};

/// Efficiencies of the downlink and their product.
struct LossBudget {
  double eta_geo = 1.0;
  double eta_p = 1.0;
  double eta_cpl = 1.0;
  double eta_atm = 1.0;
  double eta_R = 1.0;
  double eta_D = 1.0;
  double eta_sys = 1.0;

  static double to_db(double eta);
  double total_db() const { return to_db(eta_sys); }
};

/// Builds a budget from its factors; each must lie in [0, 1].
LossBudget total_loss(double eta_geo, double eta_p, double eta_cpl, double eta_atm,
                      double eta_R, double eta_D);

/// Diffraction-limited beam radius in metres after rho_km of propagation.
double diffraction_radius(const OpticsConfig& o, double rho_km, double lambda_nm);

/// Refractive-index structure constant at height h_m above ground.
double cn2(double h_m, const TurbulenceProfile& t);

/// Long-term beam broadening parameter along the slant path.
double turbulence_T(const OpticsConfig& o, const TurbulenceProfile& t, double theta,
                    double lambda_nm, double rho_km);

/// Fried coherence length in metres; empty when the path carries no turbulence.
std::optional<double> fried_r0(const TurbulenceProfile& t, double theta, double lambda_nm);

/// Wind speed in m/s at height h_m above ground.
double wind_speed(double h_m, const TurbulenceProfile& t);

/// Greenwood frequency in Hz.
double greenwood_frequency(const TurbulenceProfile& t, double theta, double lambda_nm);

/// Tracking Greenwood frequency in Hz for aperture a_R_m.
double tracking_greenwood_frequency(const TurbulenceProfile& t, double a_R_m, double theta,
                                    double lambda_nm);

/// Closed-loop coherence length from the AO bandwidths alone, without the r0 floor.
/// Requires f_c and f_tc to be positive.
double ao_corrected_r0(const OpticsConfig& o, const TurbulenceProfile& t, double theta,
                       double lambda_nm);

/// Coherence length used for the Strehl ratio: r0 without AO, else the larger of
/// r0 and the closed-loop value.
std::optional<double> effective_r0(const OpticsConfig& o, const TurbulenceProfile& t,
                                   double theta, double lambda_nm);

/// Strehl ratio; an empty r0 yields 1.
double strehl(double a_R_m, std::optional<double> r0_m);

/// Energy fraction of the Airy pattern inside half-angle gamma.
double encircled_energy(double gamma_rad, double a_R_m, double lambda_nm);

double airy_half_angle(double a_R_m, double lambda_nm);
double smf_half_angle(double a_R_m, double lambda_nm);

/// Mean coupling efficiency for a given Strehl ratio.
double coupling_efficiency(const OpticsConfig& o, double S, double lambda_nm);

struct GeoPointing {
  double eta_geo;
  double eta_p;
};
GeoPointing geometric_and_pointing(const OpticsConfig& o, double omega_t_m, double rho_km);

/// Table lookup for the atmospheric transmission.
double atmospheric_transmission(const tables::AtmosphereTable& table, Site site, double theta,
                                double lambda_nm, CloudRegime regime);

/// Every intermediate quantity of one link evaluation.
struct LinkDiagnostics {
  double rho_km;
  double omega_d_m;
  double T;
  double omega_t_m;
  std::optional<double> r0_m;
  std::optional<double> r0_eff_m;
  double strehl;
  LossBudget budget;
};

/// Full downlink budget at zenith angle theta with slant range rho_km.
LinkDiagnostics link_budget(const OpticsConfig& o, const TurbulenceProfile& t, double theta,
                            double lambda_nm, double rho_km, double eta_atm, double eta_D);

}  // namespace geoqkd::channel

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

// Scenario assembly and single-point evaluation.

#include <optional>
#include <string>

#include "geoqkd/background.hpp"
#include "geoqkd/channel.hpp"
#include "geoqkd/geometry.hpp"
#include "geoqkd/security.hpp"
#include "geoqkd/tables.hpp"
#include "geoqkd/types.hpp"

namespace geoqkd::pipeline {

/// Loss and noise given directly instead of derived from the link model.
struct AbstractChannel {
  double loss_db = 40.0;   // total system loss including detector efficiency
  double p_noise = 1e-7;   // per detector per gate
  double p_ap = 0.0;
};

struct Scenario {
  geometry::LinkGeometry geometry{48.0, 11.0, 0.21, 5.0, 35786.0, 6378.0};
  std::optional<double> zenith_deg;  // overrides the angle implied by the coordinates
  double lambda_nm = wavelengths::ca_ii;
  Site site = Site::urban;
  Illumination illumination = Illumination::night;
  CloudRegime cloud = CloudRegime::clear;
  channel::OpticsConfig optics;
  double filter_bandwidth_ghz = 0.0;  // 0 selects 1 GHz at 1550 nm and 10 GHz elsewhere
  double gate_s = 1e-9;
  std::optional<background::FovMode> fov_mode;  // default follows the coupling strategy
  double fov_rad = 0.0;
  std::optional<double> radiance;  // replaces the tabulated sky radiance
  background::DetectorType detector_type = background::DetectorType::snspd;
  background::DetectorTier detector_tier = background::DetectorTier::b;
  std::optional<double> eta_D, dark_count_rate_hz, p_ap;
  double e_mis = 0.005;
  double source_rate_hz = 1e9;
  security::ProtocolConfig protocol = default_protocol();
  bool auto_truncation = false;
  std::optional<AbstractChannel> abstract_channel;

  static security::ProtocolConfig default_protocol();
  background::DetectorSpec detector() const;
  double bandwidth_ghz() const;
  background::NoiseScenario noise(double radiance_value) const;
  void validate() const;
};

/// Channel and noise figures behind one evaluation.
struct LinkReport {
  bool abstract_mode = false;
  double zenith_deg = 0.0;
  double rho_km = 0.0;
  double eta_geo = 1.0, eta_p = 1.0, eta_cpl = 1.0, eta_atm = 1.0, eta_R = 1.0, eta_D = 1.0;
  double eta_sys = 1.0;
  double loss_db = 0.0;
  double strehl = 1.0;
  double radiance = 0.0;
  double nbar = 0.0;
  double p_dark = 0.0;
  double p_noise = 0.0;    // active receiver, per detector
  double p_noise_Z = 0.0;  // passive receivers, per detector
  double p_noise_X = 0.0;
  double p_ap = 0.0;
};

struct PointResult {
  security::KeyResult key;
  LinkReport link;
  security::ObservedCounts counts;
  security::ProtocolConfig protocol;  // as evaluated, including derived detector fields
};

/// Link budget and noise for the scenario. Tables are needed unless the
/// scenario is abstract.
LinkReport evaluate_link(const Scenario& s, const tables::DataSet* data);

/// Expected detection statistics for the receiver architecture.
security::ObservedCounts expected_counts(const security::ProtocolConfig& cfg,
                                         const LinkReport& link, double e_mis);

/// Full chain from geometry to key length. Errors carry the failing stage.
PointResult evaluate_point(const Scenario& s, const tables::DataSet* data);

/// -log2(1 - eta^(1/(n_rep+1))) for a given end-to-end transmission.
double repeater_bound(double eta, int n_rep);

/// Repeaterless or idealized repeater bound in bits per channel use.
/// Returns +infinity at zero distance.
double fiber_bound(double d_km, int n_rep, double alpha_db_per_km);

}  // namespace geoqkd::pipeline

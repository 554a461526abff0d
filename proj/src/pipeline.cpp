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

#include "geoqkd/pipeline.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "geoqkd/errors.hpp"
#include "geoqkd/receivers.hpp"

namespace geoqkd::pipeline {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError("scenario: " + what);
}

// Runs one stage and prefixes its errors with the stage name.
template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const BelowHorizonError& e) {
    throw BelowHorizonError(std::string(name) + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(std::string(name) + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string(name) + ": " + e.what());
  }
}

}  // namespace

security::ProtocolConfig Scenario::default_protocol() {
  security::ProtocolConfig p;
  p.architecture = Architecture::passive_asym;
  return p;
}

background::DetectorSpec Scenario::detector() const {
  auto d = background::DetectorSpec::lookup(detector_type, detector_tier, lambda_nm);
  if (eta_D) d.eta_D = *eta_D;
  if (dark_count_rate_hz) d.dark_count_rate_hz = *dark_count_rate_hz;
  if (p_ap) d.p_ap = *p_ap;
  d.validate();
  return d;
}

double Scenario::bandwidth_ghz() const {
  if (filter_bandwidth_ghz > 0.0) return filter_bandwidth_ghz;
  return same_wavelength(lambda_nm, wavelengths::c_band) ? 1.0 : 10.0;
}

background::NoiseScenario Scenario::noise(double radiance_value) const {
  background::NoiseScenario n;
  n.lambda_nm = lambda_nm;
  n.radiance = radiance_value;
  n.filter_bandwidth_ghz = bandwidth_ghz();
  n.gate_s = gate_s;
  n.fov_mode = fov_mode.value_or(optics.coupling == Coupling::smf ? background::FovMode::smf
                                                                  : background::FovMode::airy);
  n.fov_rad = fov_rad;
  return n;
}

void Scenario::validate() const {
  require(lambda_nm > 0.0, "wavelength must be positive");
  require(gate_s > 0.0, "gate must be positive");
  require(e_mis >= 0.0 && e_mis <= 0.5, "misalignment must lie in [0, 1/2]");
  require(source_rate_hz > 0.0, "source rate must be positive");
  require(!radiance || *radiance >= 0.0, "radiance must be non-negative");
  if (zenith_deg) require(*zenith_deg >= 0.0 && *zenith_deg < 90.0, "zenith must lie in [0, 90)");
  if (abstract_channel) {
    require(abstract_channel->loss_db >= 0.0, "abstract loss must be non-negative");
    require(abstract_channel->p_noise >= 0.0 && abstract_channel->p_noise < 1.0,
            "abstract noise probability must lie in [0, 1)");
    require(abstract_channel->p_ap >= 0.0 && abstract_channel->p_ap < 1.0,
            "abstract afterpulse probability must lie in [0, 1)");
  } else {
    geometry.validate();
    optics.validate();
  }
  protocol.validate();
}

LinkReport evaluate_link(const Scenario& s, const tables::DataSet* data) {
  s.validate();
  LinkReport r;
  const auto det = stage("detector", [&] { return s.detector(); });
  r.eta_D = det.eta_D;
  r.p_dark = det.p_dark(s.gate_s);
  const double split = s.protocol.architecture == Architecture::passive_sym ? 0.5 : s.protocol.s;

  if (s.abstract_channel) {
    const auto& a = *s.abstract_channel;
    r.abstract_mode = true;
    r.loss_db = a.loss_db;
    r.eta_sys = std::pow(10.0, -a.loss_db / 10.0);
    r.p_noise = r.p_noise_Z = r.p_noise_X = a.p_noise;
    r.p_ap = a.p_ap;
    return r;
  }
  if (data == nullptr) throw DataError("link: physical scenarios need the data tables");

  const double theta = stage("geometry", [&] {
    const double t = s.zenith_deg ? geometry::deg2rad(*s.zenith_deg)
                                  : geometry::zenith_angle(s.geometry);
    if (!(t < geometry::deg2rad(90.0))) throw BelowHorizonError("satellite below the horizon");
    return t;
  });
  r.zenith_deg = geometry::rad2deg(theta);
  r.rho_km = stage("geometry", [&] { return geometry::slant_range(theta, s.geometry); });

  r.eta_atm = stage("atmosphere", [&] {
    return channel::atmospheric_transmission(data->atmosphere, s.site, theta, s.lambda_nm,
                                             s.cloud);
  });
  const auto link = stage("channel", [&] {
    const auto turb = channel::TurbulenceProfile::for_site(s.site);
    return channel::link_budget(s.optics, turb, theta, s.lambda_nm, r.rho_km, r.eta_atm,
                                det.eta_D);
  });
  r.eta_geo = link.budget.eta_geo;
  r.eta_p = link.budget.eta_p;
  r.eta_cpl = link.budget.eta_cpl;
  r.eta_R = link.budget.eta_R;
  r.eta_sys = link.budget.eta_sys;
  r.loss_db = link.budget.total_db();
  r.strehl = link.strehl;

  stage("background", [&] {
    if (s.radiance) {
      r.radiance = *s.radiance;
    } else if (s.illumination == Illumination::night) {
      r.radiance = background::lunar_radiance(data->radiance, s.site, s.lambda_nm);
    } else {
      r.radiance = data->radiance.radiance(s.site, s.lambda_nm, s.illumination);
    }
    r.nbar = background::mean_background_photons(s.noise(r.radiance), s.optics.a_R_m);
    r.p_noise = background::noise_click_probability_active(r.nbar, r.p_dark, r.eta_R, r.eta_D);
    const auto pn =
        background::noise_click_probability_passive(r.nbar, r.p_dark, r.eta_R, r.eta_D, split);
    r.p_noise_Z = pn.p_Z;
    r.p_noise_X = pn.p_X;
    return 0;
  });
  r.p_ap = det.p_ap;
  return r;
}

security::ObservedCounts expected_counts(const security::ProtocolConfig& cfg,
                                         const LinkReport& link, double e_mis) {
  security::ObservedCounts c;
  const double N = cfg.N;
  const auto arch = cfg.architecture;
  if (arch == Architecture::active_asym) {
    const double pz = 1.0 - cfg.p_X;
    c.N_Z = N * pz * pz;
    c.N_X = N * cfg.p_X * cfg.p_X;
  } else {
    c.N_Z = N * (1.0 - cfg.p_X);
    c.N_X = N * cfg.p_X;
  }
  for (std::size_t k = 0; k < cfg.mu.size(); ++k) {
    receivers::ReceiverInputs in;
    in.mu = cfg.mu[k];
    in.eta_sys = link.eta_sys;
    in.e_mis = e_mis;
    in.p_ap = link.p_ap;
    receivers::ClickStatistics st;
    if (arch == Architecture::active_asym) {
      in.p_noise = link.p_noise;
      st = receivers::active_statistics(in);
    } else {
      in.p_noise_Z = link.p_noise_Z;
      in.p_noise_X = link.p_noise_X;
      in.s = arch == Architecture::passive_sym ? 0.5 : cfg.s;
      st = arch == Architecture::passive_sym ? receivers::passive_sym_statistics(in)
                                             : receivers::passive_asym_statistics(in);
    }
    const double w = cfg.p_mu[k];
    c.n_Z.push_back(c.N_Z * w * st.Q_Z);
    c.n_X.push_back(c.N_X * w * st.Q_X);
    c.m_Z.push_back(c.N_Z * w * st.E_Z);
    c.m_X.push_back(c.N_X * w * st.E_X);
    c.n_mc += N * w * st.Q_mc;
    if (k == 0) {
      c.qber_Z = st.Q_Z > 0.0 ? st.E_Z / st.Q_Z : 0.0;
      c.qber_X = st.Q_X > 0.0 ? st.E_X / st.Q_X : 0.0;
    }
  }
  return c;
}

PointResult evaluate_point(const Scenario& s, const tables::DataSet* data) {
  PointResult out;
  out.link = evaluate_link(s, data);
  out.protocol = s.protocol;
  if (out.protocol.architecture == Architecture::passive_sym) {
    out.protocol.p_X = 0.5;
    out.protocol.s = 0.5;
  }
  out.protocol.eta_D = out.link.eta_D;
  out.protocol.p_dark = out.link.p_dark;
  out.counts = stage("receivers",
                     [&] { return expected_counts(out.protocol, out.link, s.e_mis); });
  if (s.auto_truncation) {
    out.protocol.truncation = stage("security", [&] {
      return security::select_truncation(out.counts, out.protocol).truncation;
    });
  }
  out.key = stage("security", [&] { return security::key_length(out.counts, out.protocol); });
  return out;
}

double repeater_bound(double eta, int n_rep) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InputError("fiber: transmission must lie in [0, 1]");
  if (n_rep < 0) throw InputError("fiber: repeater count must be non-negative");
  if (eta == 1.0) return std::numeric_limits<double>::infinity();
  if (n_rep == 0) return -std::log1p(-eta) / std::numbers::ln2;
  return -std::log2(-std::expm1(std::log(eta) / (n_rep + 1)));
}

double fiber_bound(double d_km, int n_rep, double alpha_db_per_km) {
  if (!(d_km >= 0.0)) throw InputError("fiber: distance must be non-negative");
  if (n_rep < 0) throw InputError("fiber: repeater count must be non-negative");
  if (!(alpha_db_per_km >= 0.0)) throw InputError("fiber: attenuation must be non-negative");
  const double ln_eta = -alpha_db_per_km * d_km * std::log(10.0) / 10.0;
  if (ln_eta == 0.0) return std::numeric_limits<double>::infinity();
  // 1 - eta^(1/(n+1)) without cancellation.
  return -std::log2(-std::expm1(ln_eta / (n_rep + 1)));
}

}  // namespace geoqkd::pipeline

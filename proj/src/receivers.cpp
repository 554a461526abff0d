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

#include "geoqkd/receivers.hpp"

#include <cmath>
#include <string>

#include "geoqkd/errors.hpp"

namespace geoqkd::receivers {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError("receivers: " + what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void validate_common(const ReceiverInputs& in) {
  require(std::isfinite(in.mu) && in.mu >= 0.0, "mu must be finite and non-negative");
  require(is_probability(in.eta_sys), "eta_sys must lie in [0, 1]");
  require(is_probability(in.e_mis), "e_mis must lie in [0, 1]");
  require(is_probability(in.p_ap), "p_ap must lie in [0, 1]");
}

// No-click probabilities of the two detectors in one arm.
struct Arm {
  double correct;
  double wrong;
  double detect;  // probability that at least one of the pair fires, before afterpulses
};

Arm arm(double eta_mu, double e_mis, double p_noise, double p_ap) {
  const double silent = 1.0 - p_noise;
  const double detect = -std::expm1(std::log1p(-p_noise) * 2.0 - eta_mu);
  const double ap = 1.0 - detect * p_ap;
  return {silent * std::exp(-eta_mu * (1.0 - e_mis)) * ap,
          silent * std::exp(-eta_mu * e_mis) * ap, detect};
}

}  // namespace

void ReceiverInputs::validate_active() const {
  validate_common(*this);
  require(is_probability(p_noise), "p_noise must lie in [0, 1]");
}

void ReceiverInputs::validate_passive() const {
  validate_common(*this);
  require(is_probability(p_noise_Z) && is_probability(p_noise_X),
          "p_noise_Z and p_noise_X must lie in [0, 1]");
  require(s > 0.0 && s < 1.0, "split s must lie in (0, 1)");
}

ClickStatistics active_statistics(const ReceiverInputs& in) {
  in.validate_active();
  const Arm a = arm(in.eta_sys * in.mu, in.e_mis, in.p_noise, in.p_ap);
  const double q = 1.0 - a.correct * a.wrong;
  const double e = 0.5 * (1.0 - a.wrong) * (1.0 + a.correct);
  return {q, q, e, e, 0.0, a.correct * a.wrong};
}

ClickStatistics passive_asym_statistics(const ReceiverInputs& in) {
  in.validate_passive();
  const double eta_mu = in.eta_sys * in.mu;
  const Arm z = arm((1.0 - in.s) * eta_mu, in.e_mis, in.p_noise_Z, in.p_ap);
  const Arm x = arm(in.s * eta_mu, in.e_mis, in.p_noise_X, in.p_ap);
  const double veto_z = x.correct * x.wrong;  // X arm silent
  const double veto_x = z.correct * z.wrong;  // Z arm silent

  ClickStatistics out;
  out.Q_Z = ((1.0 - z.correct) * z.wrong + z.correct * (1.0 - z.wrong)) * veto_z;
  out.E_Z = (1.0 - z.wrong) * z.correct * veto_z;
  out.Q_X = ((1.0 - x.correct) * x.wrong + x.correct * (1.0 - x.wrong)) * veto_x;
  out.E_X = (1.0 - x.wrong) * x.correct * veto_x;
  out.P_empty = veto_z * veto_x;
  out.Q_mc = 1.0 - out.P_empty - out.Q_Z - out.Q_X;
  if (out.Q_mc < 0.0) out.Q_mc = 0.0;
  return out;
}

ClickStatistics passive_sym_statistics(const ReceiverInputs& in) {
  ReceiverInputs half = in;
  half.s = 0.5;
  half.validate_passive();
  const double eta_mu = 0.5 * in.eta_sys * in.mu;
  const Arm z = arm(eta_mu, in.e_mis, in.p_noise_Z, in.p_ap);
  const Arm x = arm(eta_mu, in.e_mis, in.p_noise_X, in.p_ap);
  const double veto_z = x.correct * x.wrong;
  const double veto_x = z.correct * z.wrong;

  ClickStatistics out;
  out.Q_Z = (1.0 - z.correct * z.wrong) * veto_z;
  out.E_Z = 0.5 * (1.0 - z.wrong) * (1.0 + z.correct) * veto_z;
  out.Q_X = (1.0 - x.correct * x.wrong) * veto_x;
  out.E_X = 0.5 * (1.0 - x.wrong) * (1.0 + x.correct) * veto_x;
  out.P_empty = veto_z * veto_x;
  // Clicks in both arms: (1 - veto_x)(1 - veto_z).
  out.Q_mc = (1.0 - veto_x) * (1.0 - veto_z);
  return out;
}

double vacuum_single_click(double basis_probability, double p_dark) {
  require(is_probability(basis_probability) && is_probability(p_dark),
          "basis probability and p_dark must lie in [0, 1]");
  return basis_probability * 2.0 * p_dark * std::pow(1.0 - p_dark, 3);
}

}  // namespace geoqkd::receivers

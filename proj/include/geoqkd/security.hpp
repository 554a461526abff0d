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
#include <string>
#include <vector>

#include "geoqkd/lp.hpp"
#include "geoqkd/types.hpp"

namespace geoqkd::security {

/// Decoy-state BB84 protocol settings.
struct ProtocolConfig {
  double N = 1e12;                         // transmission rounds
  std::vector<double> mu{0.5, 0.1, 0.0};   // intensities, signal first
  std::vector<double> p_mu{0.8, 0.15, 0.05};
  double p_X = 0.1;                        // Alice's test-basis probability
  int truncation = 10;                     // photon-number cutoff I
  double eps_tot = 1e-8;
  double f_EC = 1.16;
  Architecture architecture = Architecture::active_asym;
  double s = 0.5;                          // passive splitting ratio towards X
  double r = 0.5;                          // disclosed fraction, symmetric passive
  bool strict_lp = false;                  // full LP with per-photon-number deviations
  double eta_D = 1.0;                      // detector efficiency, passive multi-click bound
  double p_dark = 0.0;                     // dark-click probability, passive vacuum bound

  void validate() const;
};

/// Expected sifted statistics per intensity. m_Z is only read by the symmetric
/// passive analysis, n_mc only by the asymmetric passive one.
struct ObservedCounts {
  std::vector<double> n_Z, n_X;  // detections per intensity
  std::vector<double> m_Z, m_X;  // bit errors per intensity
  double N_Z = 0.0, N_X = 0.0;   // rounds prepared and measured in each basis
  double n_mc = 0.0;             // multi-click rounds
  double qber_Z = 0.0, qber_X = 0.0;  // channel QBER used for error-correction leakage

  void validate(std::size_t intensities) const;
};

/// Split of the total failure probability.
struct EpsilonBudget {
  double eps_PE = 0, eps_cor = 0, eps_PA = 0, eps_ind = 0;
  int S_n = 0;
  double eps_0Z = 0, eps_0X = 0, eps_PNE = 0, eps_S = 0, eps_decoy = 0;

  /// 2 sqrt(eps_PE) + eps_PA + eps_cor.
  double total() const;
};

EpsilonBudget allocate_epsilons(const ProtocolConfig& cfg);

/// Poisson source statistics up to the cutoff.
struct PhotonStatistics {
  std::vector<double> p_i;                // i = 0..I
  std::vector<std::vector<double>> cond;  // cond[j][i] = p(mu_j | i)
  double tail = 0.0;                      // 1 - sum_{i<=I} p_i
};

PhotonStatistics poisson_conditionals(const std::vector<double>& mu,
                                      const std::vector<double>& p_mu, int truncation);

/// Decoy LP for one basis and one observable (detections or errors), in
/// count units. Deviation bounds are filled by build_decoy_lp.
struct DecoyLinearProgram {
  PhotonStatistics photons;
  std::vector<double> observed;  // per-intensity counts
  double total = 0.0;            // sum of observed counts, caps each photon-number term
  double N_B = 0.0;              // rounds in this basis
  bool strict = false;

  std::vector<double> delta_L, delta_U;      // per-intensity deviations
  double delta_gt_L = 0.0, delta_gt_U = 0.0;  // above-cutoff deviation
  std::vector<double> delta_i_L, delta_i_U;  // strict mode only
  double delta_le_L = 0.0, delta_le_U = 0.0;  // strict mode only

  /// Scaled LP over (n_i / total, delta_j / total[, strict deviations]).
  lp::LinearProgram scaled(int target) const;
};

DecoyLinearProgram build_decoy_lp(const PhotonStatistics& photons,
                                  const std::vector<double>& observed, double N_B,
                                  double eps_ind, bool strict);

struct LpOutcome {
  double value = 0.0;
  lp::Status status = lp::Status::optimal;
  bool fallback = false;  // solver failed; conservative value returned
  std::vector<int> binding_rows;
};

/// Minimum or maximum of the target photon-number count.
LpOutcome solve_decoy_lp(const DecoyLinearProgram& lp, lp::Objective sense, int target = 1);

/// Single-photon bounds feeding the phase-error estimate.
struct SinglePhotonBounds {
  double n1Z_L = 0, n1Z_U = 0;
  double n1X_L = 0, n1X_U = 0;
  double m1X_L = 0, m1X_U = 0;
};

/// Phase-error upper bound from random sampling without replacement.
/// Empty when the test set carries no single-photon rounds.
std::optional<double> phase_error_upper(const SinglePhotonBounds& b, double eps_S);

struct KeyResult {
  double ell = 0.0;             // bits, integer valued
  double ell_continuous = 0.0;  // before flooring and clamping
  double rate = 0.0;            // ell / N
  SinglePhotonBounds bounds;
  SinglePhotonBounds raw_bounds;  // decoy bounds before vacuum and multi-photon subtraction
  double phi1_U = 0.0;
  double lambda_EC = 0.0;
  bool feasible = false;        // ell > 0
  bool lp_fallback = false;
  std::string status = "ok";
  std::vector<std::string> binding;
  // Architecture-specific diagnostics.
  double ell_Z = 0.0, ell_X = 0.0;
  double B0_Z = 0.0, B0_X = 0.0, V_mc = 0.0;
};

/// Privacy-amplification and error-verification overhead in bits.
double pa_overhead_bits(const EpsilonBudget& eps);

KeyResult key_length_active(const ObservedCounts& counts, const ProtocolConfig& cfg);
KeyResult key_length_passive_asym(const ObservedCounts& counts, const ProtocolConfig& cfg);
KeyResult key_length_passive_sym(const ObservedCounts& counts, const ProtocolConfig& cfg);

/// Dispatches on cfg.architecture.
KeyResult key_length(const ObservedCounts& counts, const ProtocolConfig& cfg);

/// Relative change of the continuous key length when the cutoff grows by two.
double truncation_sensitivity(const ObservedCounts& counts, const ProtocolConfig& cfg);

/// Outcome of the cutoff search.
struct TruncationChoice {
  int truncation = 0;
  double sensitivity = 0.0;
  bool converged = false;
};

/// Raises the cutoff in steps of two from cfg.truncation until the key length
/// moves by less than tol, stopping at max_truncation.
TruncationChoice select_truncation(const ObservedCounts& counts, const ProtocolConfig& cfg,
                                   double tol = 1e-3, int max_truncation = 30);

}  // namespace geoqkd::security

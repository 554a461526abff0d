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

#include "geoqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "geoqkd/errors.hpp"
#include "geoqkd/receivers.hpp"
#include "geoqkd/stats.hpp"

namespace geoqkd::security {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError("security: " + what);
}

std::int64_t as_trials(double n) {
  return std::max<std::int64_t>(1, std::llround(n));
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> scaled_copy(const std::vector<double>& v, double f) {
  std::vector<double> out(v);
  for (double& x : out) x *= f;
  return out;
}

// Row labels of DecoyLinearProgram::scaled, for diagnostics.
std::string row_label(const DecoyLinearProgram& lp, int row) {
  const int J = static_cast<int>(lp.observed.size());
  if (row < J) return "expect_lower[" + std::to_string(row) + "]";
  if (row < 2 * J) return "expect_upper[" + std::to_string(row - J) + "]";
  if (row == 2 * J) return "deviation_sum";
  const int I1 = static_cast<int>(lp.photons.p_i.size());
  const int k = row - 2 * J - 1;
  if (k < I1) return "photon_cap[" + std::to_string(k) + "]";
  if (k == I1) return "cutoff_sum_upper";
  if (k == I1 + 1) return "cutoff_sum_lower";
  return "deviation_balance";
}

struct BasisBounds {
  LpOutcome lower, upper;
};

BasisBounds bound_both(const DecoyLinearProgram& lp) {
  return {solve_decoy_lp(lp, lp::Objective::minimize), solve_decoy_lp(lp, lp::Objective::maximize)};
}

void note_lp(KeyResult& r, const std::string& tag, const DecoyLinearProgram& lp,
             const LpOutcome& o) {
  if (o.fallback) {
    r.lp_fallback = true;
    r.status = "lp_" + lp::to_string(o.status);
  }
  for (int row : o.binding_rows) r.binding.push_back(tag + ":" + row_label(lp, row));
}

// Finishes a key-length evaluation from single-photon bounds.
void finish(KeyResult& r, const SinglePhotonBounds& b, double eps_S, double n_key, double qber,
            const ProtocolConfig& cfg, const EpsilonBudget& eps) {
  r.bounds = b;
  r.lambda_EC = cfg.f_EC * n_key * stats::binary_entropy(qber);
  const double base = -r.lambda_EC - pa_overhead_bits(eps);
  r.ell_continuous = base;
  r.phi1_U = 0.5;
  if (!(b.n1Z_L > 0.0)) {
    if (r.status == "ok") r.status = "no_single_photon_key";
  } else if (b.n1X_L > b.n1X_U * (1.0 + 1e-9) + 1e-9) {
    r.status = "bound_inversion";
  } else {
    const auto phi = phase_error_upper(b, eps_S);
    if (!phi) {
      r.status = "no_test_data";
    } else {
      r.phi1_U = *phi;
      if (*phi >= 0.5) {
        r.status = "phase_error_saturated";
      } else {
        r.ell_continuous = b.n1Z_L * (1.0 - stats::binary_entropy(*phi)) + base;
      }
    }
  }
  r.ell = std::max(std::floor(r.ell_continuous), 0.0);
  r.feasible = r.ell > 0.0;
  if (r.status == "ok" && !r.feasible) r.status = "zero_key";
  r.rate = r.ell / cfg.N;
}

// Decoy bounds for a key basis and a test basis with error counts.
struct DecoyEstimate {
  SinglePhotonBounds b;
  KeyResult diag;
};

DecoyEstimate estimate(const PhotonStatistics& ph, const std::vector<double>& key_counts,
                       double key_rounds, const std::vector<double>& test_counts,
                       const std::vector<double>& test_errors, double test_rounds,
                       const EpsilonBudget& eps, bool strict) {
  DecoyEstimate out;
  const auto lz = build_decoy_lp(ph, key_counts, key_rounds, eps.eps_ind, strict);
  const auto lx = build_decoy_lp(ph, test_counts, test_rounds, eps.eps_ind, strict);
  const auto lm = build_decoy_lp(ph, test_errors, test_rounds, eps.eps_ind, strict);
  const auto z = bound_both(lz);
  const auto x = bound_both(lx);
  const auto m = bound_both(lm);
  out.b = {z.lower.value, z.upper.value, x.lower.value, x.upper.value, m.lower.value,
           m.upper.value};
  note_lp(out.diag, "n1Z_L", lz, z.lower);
  note_lp(out.diag, "n1Z_U", lz, z.upper);
  note_lp(out.diag, "n1X_L", lx, x.lower);
  note_lp(out.diag, "n1X_U", lx, x.upper);
  note_lp(out.diag, "m1X_L", lm, m.lower);
  note_lp(out.diag, "m1X_U", lm, m.upper);
  return out;
}

}  // namespace

void ProtocolConfig::validate() const {
  require(std::isfinite(N) && N >= 1.0, "N must be at least 1");
  require(!mu.empty() && mu.size() == p_mu.size(),
          "mu and p_mu must be non-empty and of equal length");
  for (std::size_t j = 0; j < mu.size(); ++j) {
    require(std::isfinite(mu[j]) && mu[j] >= 0.0, "intensities must be non-negative");
    require(p_mu[j] > 0.0 && p_mu[j] <= 1.0, "intensity probabilities must lie in (0, 1]");
    for (std::size_t k = 0; k < j; ++k) require(mu[j] != mu[k], "intensities must be distinct");
  }
  require(std::abs(sum(p_mu) - 1.0) < 1e-9, "intensity probabilities must sum to 1");
  require(p_X > 0.0 && p_X < 1.0, "p_X must lie in (0, 1)");
  require(truncation >= 1 && truncation >= static_cast<int>(mu.size()) - 1 && truncation <= 60,
          "truncation must satisfy max(1, J) <= I <= 60");
  require(eps_tot > 0.0 && eps_tot < 1.0, "eps_tot must lie in (0, 1)");
  require(f_EC > 0.0, "f_EC must be positive");
  require(eta_D >= 0.0 && eta_D <= 1.0, "eta_D must lie in [0, 1]");
  require(p_dark >= 0.0 && p_dark <= 1.0, "p_dark must lie in [0, 1]");
  if (architecture != Architecture::active_asym) require(s > 0.0 && s < 1.0, "s must lie in (0, 1)");
  if (architecture == Architecture::passive_asym) require(eta_D > 0.0, "eta_D must be positive");
  if (architecture == Architecture::passive_sym) {
    require(r > 0.0 && r < 1.0, "disclosure fraction r must lie strictly between 0 and 1");
  }
}

void ObservedCounts::validate(std::size_t intensities) const {
  auto check = [&](const std::vector<double>& v, const char* name, bool optional) {
    if (optional && v.empty()) return;
    require(v.size() == intensities, std::string(name) + " must have one entry per intensity");
    for (double x : v) require(std::isfinite(x) && x >= 0.0, std::string(name) + " must be >= 0");
  };
  check(n_Z, "n_Z", false);
  check(n_X, "n_X", false);
  check(m_X, "m_X", false);
  check(m_Z, "m_Z", true);
  for (std::size_t k = 0; k < intensities; ++k) {
    require(m_X[k] <= n_X[k] * (1.0 + 1e-12), "m_X must not exceed n_X");
    if (!m_Z.empty()) require(m_Z[k] <= n_Z[k] * (1.0 + 1e-12), "m_Z must not exceed n_Z");
  }
  require(N_Z >= 0.0 && N_X >= 0.0 && n_mc >= 0.0, "round totals must be non-negative");
  require(qber_Z >= 0.0 && qber_Z <= 1.0 && qber_X >= 0.0 && qber_X <= 1.0,
          "QBER must lie in [0, 1]");
}

double EpsilonBudget::total() const { return 2.0 * std::sqrt(eps_PE) + eps_PA + eps_cor; }

EpsilonBudget allocate_epsilons(const ProtocolConfig& cfg) {
  require(cfg.eps_tot > 0.0 && cfg.eps_tot < 1.0, "eps_tot must lie in (0, 1)");
  EpsilonBudget e;
  e.eps_cor = 1e-3 * cfg.eps_tot;
  e.eps_PA = 1e-3 * cfg.eps_tot;
  const double half = (cfg.eps_tot - e.eps_cor - e.eps_PA) / 2.0;
  e.eps_PE = half * half;
  const int lp_constraints = cfg.strict_lp ? 4 * cfg.truncation + 30 : 20;
  if (cfg.architecture == Architecture::passive_asym) {
    e.S_n = lp_constraints + 4;
    e.eps_ind = e.eps_PE / e.S_n;
    e.eps_0Z = e.eps_0X = e.eps_PNE = e.eps_ind;
  } else {
    e.S_n = lp_constraints + 1;
    e.eps_ind = e.eps_PE / e.S_n;
  }
  e.eps_S = e.eps_ind;
  e.eps_decoy = lp_constraints * e.eps_ind;
  return e;
}

PhotonStatistics poisson_conditionals(const std::vector<double>& mu,
                                      const std::vector<double>& p_mu, int truncation) {
  require(!mu.empty() && mu.size() == p_mu.size(), "mu and p_mu must match");
  require(truncation >= 0, "truncation must be non-negative");
  const std::size_t J = mu.size();
  const int I = truncation;
  std::vector<std::vector<double>> joint(J, std::vector<double>(I + 1, 0.0));
  PhotonStatistics out;
  out.p_i.assign(I + 1, 0.0);
  for (std::size_t j = 0; j < J; ++j) {
    double term = std::exp(-mu[j]);
    for (int i = 0; i <= I; ++i) {
      if (i > 0) term *= mu[j] / i;
      joint[j][i] = p_mu[j] * term;
      out.p_i[i] += joint[j][i];
    }
    if (mu[j] > 0.0) out.tail += p_mu[j] * boost::math::gamma_p(I + 1.0, mu[j]);
  }
  out.cond.assign(J, std::vector<double>(I + 1, 0.0));
  for (int i = 0; i <= I; ++i) {
    if (!(out.p_i[i] > 0.0)) {
      throw InputError("security: degenerate source, no weight on " + std::to_string(i) +
                       "-photon states");
    }
    for (std::size_t j = 0; j < J; ++j) out.cond[j][i] = joint[j][i] / out.p_i[i];
  }
  return out;
}

DecoyLinearProgram build_decoy_lp(const PhotonStatistics& photons,
                                  const std::vector<double>& observed, double N_B,
                                  double eps_ind, bool strict) {
  require(observed.size() == photons.cond.size(), "observed counts must match intensities");
  require(eps_ind > 0.0, "eps_ind must be positive");
  DecoyLinearProgram lp;
  lp.photons = photons;
  lp.observed = observed;
  lp.total = sum(observed);
  lp.N_B = N_B;
  lp.strict = strict;
  if (lp.total < 1.0) return lp;

  const std::size_t J = observed.size();
  lp.delta_L.resize(J);
  lp.delta_U.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    const double ph = std::clamp(observed[j] / lp.total, 0.0, 1.0);
    const auto f = stats::poisson_binomial_bounds(lp.total, ph, eps_ind);
    lp.delta_L[j] = lp.total * f.lower - observed[j];
    lp.delta_U[j] = lp.total * f.upper - observed[j];
  }
  const std::int64_t trials = as_trials(N_B);
  const double tail = std::clamp(photons.tail, 0.0, 1.0);
  lp.delta_gt_U = N_B * stats::binomial_upper_bound(trials, tail, eps_ind) - N_B * tail;
  if (strict) {
    lp.delta_gt_L = N_B * stats::binomial_lower_bound(trials, tail, eps_ind) - N_B * tail;
    const int I1 = static_cast<int>(photons.p_i.size());
    lp.delta_i_L.resize(I1);
    lp.delta_i_U.resize(I1);
    for (int i = 0; i < I1; ++i) {
      const auto g = stats::binomial_bounds(trials, photons.p_i[i], eps_ind);
      lp.delta_i_L[i] = N_B * g.lower - N_B * photons.p_i[i];
      lp.delta_i_U[i] = N_B * g.upper - N_B * photons.p_i[i];
    }
    const double head = std::clamp(sum(photons.p_i), 0.0, 1.0);
    const auto g = stats::binomial_bounds(trials, head, eps_ind);
    lp.delta_le_L = N_B * g.lower - N_B * head;
    lp.delta_le_U = N_B * g.upper - N_B * head;
  }
  return lp;
}

lp::LinearProgram DecoyLinearProgram::scaled(int target) const {
  const int I1 = static_cast<int>(photons.p_i.size());
  const int J = static_cast<int>(observed.size());
  require(target >= 0 && target < I1, "target photon number outside the cutoff");
  require(total >= 1.0 && static_cast<int>(delta_L.size()) == J, "LP bounds not built");
  const double inv = 1.0 / total;

  lp::LinearProgram p;
  for (int i = 0; i < I1; ++i) p.add_variable(0.0, 1.0, i == target ? 1.0 : 0.0);
  for (int j = 0; j < J; ++j) p.add_variable(delta_L[j] * inv, delta_U[j] * inv);
  int gt = -1;
  std::vector<int> di;
  if (strict) {
    for (int i = 0; i < I1; ++i) di.push_back(p.add_variable(delta_i_L[i] * inv, delta_i_U[i] * inv));
    gt = p.add_variable(delta_gt_L * inv, delta_gt_U * inv);
  }
  const int n = p.num_variables();
  const double trunc = strict ? N_B * photons.tail * inv : (N_B * photons.tail + delta_gt_U) * inv;

  // Conditionals below kNegligible are dropped. The upper row only loosens;
  // the lower row absorbs the dropped mass into its right-hand side since
  // every photon variable is at most one.
  constexpr double kNegligible = 1e-12;
  for (int j = 0; j < J; ++j) {
    std::vector<double> a(n, 0.0);
    for (int i = 0; i < I1; ++i) {
      if (photons.cond[j][i] >= kNegligible) a[i] = photons.cond[j][i];
    }
    a[I1 + j] = -1.0;
    p.add_row(a, lp::RowSense::le, observed[j] * inv);
  }
  for (int j = 0; j < J; ++j) {
    std::vector<double> a(n, 0.0);
    double dropped = 0.0;
    for (int i = 0; i < I1; ++i) {
      if (photons.cond[j][i] >= kNegligible) {
        a[i] = -photons.cond[j][i];
      } else {
        dropped += photons.cond[j][i];
      }
    }
    a[I1 + j] = 1.0;
    if (strict) a[gt] = -1.0;
    p.add_row(a, lp::RowSense::le, trunc - observed[j] * inv + dropped);
  }
  {
    std::vector<double> a(n, 0.0);
    for (int j = 0; j < J; ++j) a[I1 + j] = 1.0;
    p.add_row(a, lp::RowSense::eq, 0.0);
  }
  if (strict) {
    for (int i = 0; i < I1; ++i) {
      std::vector<double> a(n, 0.0);
      a[i] = 1.0;
      a[di[i]] = -1.0;
      p.add_row(a, lp::RowSense::le, photons.p_i[i] * N_B * inv);
    }
    std::vector<double> a(n, 0.0);
    for (int i = 0; i < I1; ++i) a[di[i]] = 1.0;
    p.add_row(a, lp::RowSense::le, delta_le_U * inv);
    p.add_row(a, lp::RowSense::ge, delta_le_L * inv);
    a[gt] = 1.0;
    p.add_row(a, lp::RowSense::eq, 0.0);
  }
  return p;
}

LpOutcome solve_decoy_lp(const DecoyLinearProgram& lp, lp::Objective sense, int target) {
  LpOutcome out;
  const bool minimize = sense == lp::Objective::minimize;
  if (lp.total <= 0.0) return out;
  if (lp.total < 1.0) {
    out.value = minimize ? 0.0 : lp.total;
    return out;
  }
  const auto sol = lp::solve(lp.scaled(target), sense);
  out.status = sol.status;
  if (sol.status != lp::Status::optimal) {
    out.fallback = true;
    out.value = minimize ? 0.0 : lp.total;
    return out;
  }
  out.value = std::clamp(sol.objective * lp.total, 0.0, lp.total);
  out.binding_rows = sol.binding_rows;
  return out;
}

std::optional<double> phase_error_upper(const SinglePhotonBounds& b, double eps_S) {
  require(b.n1Z_L > 0.0, "phase-error bound needs a positive single-photon key count");
  require(eps_S > 0.0, "eps_S must be positive");
  if (b.n1X_L > b.n1X_U * (1.0 + 1e-9) + 1e-9) {
    throw InputError("security: test-set single-photon bounds are inverted (L > U)");
  }
  const double population = b.n1Z_U + b.n1X_U;
  const auto N_H = static_cast<std::int64_t>(std::ceil(population));
  const auto n_H = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(b.n1X_L)), N_H);
  if (n_H < 1) return std::nullopt;
  const double x = std::min(1.0, b.m1X_U / b.n1X_L);
  const double H = stats::hypergeom_upper(N_H, n_H, x, eps_S);
  return std::max(0.0, (population * H - b.m1X_L) / b.n1Z_L);
}

double pa_overhead_bits(const EpsilonBudget& eps) {
  return -1.0 - 2.0 * std::log2(eps.eps_PA) - std::log2(eps.eps_cor);
}

KeyResult key_length_active(const ObservedCounts& counts, const ProtocolConfig& cfg) {
  cfg.validate();
  counts.validate(cfg.mu.size());
  const auto eps = allocate_epsilons(cfg);
  const auto ph = poisson_conditionals(cfg.mu, cfg.p_mu, cfg.truncation);
  auto est = estimate(ph, counts.n_Z, counts.N_Z, counts.n_X, counts.m_X, counts.N_X, eps,
                      cfg.strict_lp);
  KeyResult r = est.diag;
  r.raw_bounds = est.b;
  finish(r, est.b, eps.eps_S, sum(counts.n_Z), counts.qber_Z, cfg, eps);
  return r;
}

KeyResult key_length_passive_asym(const ObservedCounts& counts, const ProtocolConfig& cfg) {
  cfg.validate();
  require(cfg.architecture == Architecture::passive_asym, "configuration is not passive_asym");
  counts.validate(cfg.mu.size());
  const auto eps = allocate_epsilons(cfg);
  const auto ph = poisson_conditionals(cfg.mu, cfg.p_mu, cfg.truncation);
  auto est = estimate(ph, counts.n_Z, counts.N_Z, counts.n_X, counts.m_X, counts.N_X, eps,
                      cfg.strict_lp);
  KeyResult r = est.diag;
  r.raw_bounds = est.b;

  const std::int64_t N = as_trials(cfg.N);
  const double q_Z = receivers::vacuum_single_click(1.0 - cfg.p_X, cfg.p_dark);
  const double q_X = receivers::vacuum_single_click(cfg.p_X, cfg.p_dark);
  const double lambda_min = cfg.eta_D * cfg.eta_D * 2.0 * cfg.s * (1.0 - cfg.s);
  const auto k_mc = std::min<std::int64_t>(static_cast<std::int64_t>(std::ceil(counts.n_mc)), N);
  r.B0_Z = static_cast<double>(stats::binom_threshold_B0(N, q_Z, eps.eps_0Z));
  r.B0_X = static_cast<double>(stats::binom_threshold_B0(N, q_X, eps.eps_0X));
  r.V_mc = static_cast<double>(stats::binom_trials_inversion_V(k_mc, eps.eps_PNE, lambda_min, N));

  SinglePhotonBounds b = est.b;
  b.n1Z_L = std::max(0.0, b.n1Z_L - r.B0_Z - r.V_mc);
  b.n1X_L = std::max(0.0, b.n1X_L - r.B0_X - r.V_mc);
  b.m1X_L = std::max(0.0, b.m1X_L - r.B0_X - r.V_mc);
  finish(r, b, eps.eps_S, sum(counts.n_Z), counts.qber_Z, cfg, eps);
  return r;
}

KeyResult key_length_passive_sym(const ObservedCounts& counts, const ProtocolConfig& cfg) {
  cfg.validate();
  require(cfg.architecture == Architecture::passive_sym, "configuration is not passive_sym");
  counts.validate(cfg.mu.size());
  require(counts.m_Z.size() == cfg.mu.size(), "symmetric analysis needs Z-basis error counts");
  const auto eps = allocate_epsilons(cfg);
  const auto ph = poisson_conditionals(cfg.mu, cfg.p_mu, cfg.truncation);
  const double keep = 1.0 - cfg.r;

  auto one_basis = [&](const std::vector<double>& key, double key_rounds,
                       const std::vector<double>& test, const std::vector<double>& test_err,
                       double test_rounds, double qber) {
    auto est = estimate(ph, scaled_copy(key, keep), key_rounds * keep, scaled_copy(test, cfg.r),
                        scaled_copy(test_err, cfg.r), test_rounds * cfg.r, eps, cfg.strict_lp);
    KeyResult r = est.diag;
    r.raw_bounds = est.b;
    finish(r, est.b, eps.eps_S, sum(key) * keep, qber, cfg, eps);
    return r;
  };
  KeyResult z = one_basis(counts.n_Z, counts.N_Z, counts.n_X, counts.m_X, counts.N_X,
                          counts.qber_Z);
  const KeyResult x = one_basis(counts.n_X, counts.N_X, counts.n_Z, counts.m_Z, counts.N_Z,
                                counts.qber_X);
  z.ell_Z = z.ell;
  z.ell_X = x.ell;
  z.ell = z.ell_Z + z.ell_X;
  z.ell_continuous += x.ell_continuous;
  z.lambda_EC += x.lambda_EC;
  z.lp_fallback = z.lp_fallback || x.lp_fallback;
  z.feasible = z.ell > 0.0;
  if (z.feasible) z.status = "ok";
  z.rate = z.ell / cfg.N;
  return z;
}

KeyResult key_length(const ObservedCounts& counts, const ProtocolConfig& cfg) {
  switch (cfg.architecture) {
    case Architecture::active_asym: return key_length_active(counts, cfg);
    case Architecture::passive_asym: return key_length_passive_asym(counts, cfg);
    case Architecture::passive_sym: return key_length_passive_sym(counts, cfg);
  }
  throw InputError("security: unknown architecture");
}

double truncation_sensitivity(const ObservedCounts& counts, const ProtocolConfig& cfg) {
  ProtocolConfig wider = cfg;
  wider.truncation += 2;
  const double a = key_length(counts, cfg).ell_continuous;
  const double b = key_length(counts, wider).ell_continuous;
  return std::abs(b - a) / std::max(std::abs(a), 1.0);
}

TruncationChoice select_truncation(const ObservedCounts& counts, const ProtocolConfig& cfg,
                                   double tol, int max_truncation) {
  ProtocolConfig c = cfg;
  TruncationChoice out;
  double prev = key_length(counts, c).ell_continuous;
  while (true) {
    out.truncation = c.truncation;
    if (c.truncation + 2 > max_truncation) return out;
    c.truncation += 2;
    const double next = key_length(counts, c).ell_continuous;
    out.sensitivity = std::abs(next - prev) / std::max(std::abs(prev), 1.0);
    if (out.sensitivity < tol) {
      out.converged = true;
      return out;
    }
    prev = next;
  }
}

}  // namespace geoqkd::security

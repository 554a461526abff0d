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

// Exhaustive coverage checks for the exact confidence bounds.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "geoqkd/stats.hpp"
#include "stat_oracles.hpp"

namespace oracle {

struct CoverageReport {
  long cases = 0;
  long violations = 0;
  double worst_ratio = 0.0;  // max over cases of (violation probability / eps)
  std::string worst_case;
};

inline void record(CoverageReport& r, long double prob, double eps, const std::string& tag) {
  ++r.cases;
  const double ratio = static_cast<double>(prob) / eps;
  if (ratio > r.worst_ratio) {
    r.worst_ratio = ratio;
    r.worst_case = tag;
  }
  // Allow for long-double rounding in the enumerated sum only.
  if (prob > eps * (1.0 + 1e-12)) ++r.violations;
}

inline std::vector<double> probability_grid() {
  std::vector<double> g = {0.0, 1e-3, 0.01, 0.03};
  for (int i = 1; i < 20; ++i) g.push_back(0.05 * i);
  g.push_back(0.97);
  g.push_back(0.99);
  g.push_back(1.0);
  return g;
}

/// Binomial G^U/G^L: Pr[X/N >= G^U] <= eps and Pr[X/N <= G^L] <= eps.
inline CoverageReport binomial_coverage(int n_max, const std::vector<double>& eps_grid) {
  CoverageReport r;
  for (int n = 1; n <= n_max; ++n) {
    for (double p : probability_grid()) {
      const auto pmf = binomial_pmf(n, p);
      for (double eps : eps_grid) {
        const auto b = geoqkd::stats::binomial_bounds(n, p, eps);
        long double up = 0.0L, lo = 0.0L;
        for (int k = 0; k <= n; ++k) {
          const double frac = static_cast<double>(k) / n;
          if (frac >= b.upper) up += pmf[k];
          if (frac <= b.lower) lo += pmf[k];
        }
        const std::string tag = "n=" + std::to_string(n) + " p=" + std::to_string(p) +
                                " eps=" + std::to_string(eps);
        record(r, up, eps, "G^U " + tag);
        record(r, lo, eps, "G^L " + tag);
      }
    }
  }
  return r;
}

/// Theorem-1 bounds on i.i.d. trials: Pr[p < F^L(X/N)] <= eps, Pr[p > F^U(X/N)] <= eps.
inline CoverageReport poisson_binomial_coverage(int n_max, const std::vector<double>& eps_grid) {
  CoverageReport r;
  for (int n = 1; n <= n_max; ++n) {
    for (double p : probability_grid()) {
      const auto pmf = binomial_pmf(n, p);
      for (double eps : eps_grid) {
        if (eps > 0.25) continue;
        long double lo = 0.0L, up = 0.0L;
        for (int k = 0; k <= n; ++k) {
          const double ph = static_cast<double>(k) / n;
          const auto b = geoqkd::stats::poisson_binomial_bounds(n, ph, eps);
          if (p < b.lower) lo += pmf[k];
          if (p > b.upper) up += pmf[k];
        }
        const std::string tag = "n=" + std::to_string(n) + " p=" + std::to_string(p) +
                                " eps=" + std::to_string(eps);
        record(r, lo, eps, "F^L " + tag);
        record(r, up, eps, "F^U " + tag);
      }
    }
  }
  return r;
}

/// Theorem-3 sampling bound: Pr[q_hat >= q^U(p_hat)] <= eps for every true ones-count.
inline CoverageReport hypergeom_coverage(int N_max, const std::vector<double>& eps_grid) {
  CoverageReport r;
  for (int N = 2; N <= N_max; ++N) {
    for (int n = 1; n < N; ++n) {
      for (double eps : eps_grid) {
        std::vector<double> qu(n + 1);
        for (int y = 0; y <= n; ++y) {
          qu[y] = geoqkd::stats::q_upper(N, n, static_cast<double>(y) / n, eps);
        }
        for (int K = 0; K <= N; ++K) {
          long double viol = 0.0L;
          for (int y = std::max(0, n - (N - K)); y <= std::min(n, K); ++y) {
            const double q_hat = static_cast<double>(K - y) / (N - n);
            if (q_hat >= qu[y] - 1e-12) viol += hypergeom_pmf(N, K, n, y);
          }
          record(r, viol, eps,
                 "N=" + std::to_string(N) + " n=" + std::to_string(n) +
                     " K=" + std::to_string(K) + " eps=" + std::to_string(eps));
        }
      }
    }
  }
  return r;
}

}  // namespace oracle

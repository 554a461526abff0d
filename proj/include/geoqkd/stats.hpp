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

#include <cstdint>

namespace geoqkd::stats {

/// Lower/upper pair returned by two-sided bound functions.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

/// Solves I_x(a, b) = p for x.
double inv_reg_inc_beta(double p, double a, double b);

/// Binary entropy in bits, with 0 log 0 = 0.
double binary_entropy(double x);

/// Pr[X >= k] for X ~ Bin(n, p). Returns 1 for k <= 0 and 0 for k > n.
double binomial_upper_tail(std::int64_t n, std::int64_t k, double p);

/// Pr[X <= k] for X ~ Bin(n, p). Returns 0 for k < 0 and 1 for k >= n.
double binomial_cdf(std::int64_t n, std::int64_t k, double p);

/// Lower confidence bound on the mean of n independent Bernoulli trials.
/// Accepts real-valued n and n*p_hat; eps must lie in (0, 1/4].
double poisson_binomial_lower(double n, double p_hat, double eps);

/// Upper companion, defined as 1 - lower(1 - p_hat).
double poisson_binomial_upper(double n, double p_hat, double eps);

/// Both bounds at once.
Interval poisson_binomial_bounds(double n, double p_hat, double eps);

/// Smallest k in {-1..n+1} with Pr[Bin(n,p) >= k] <= eps, divided by n.
double binomial_upper_bound(std::int64_t n, double p, double eps);

/// Largest k in {-1..n+1} with Pr[Bin(n,p) <= k] <= eps, divided by n.
double binomial_lower_bound(std::int64_t n, double p, double eps);

/// Both binomial fraction bounds; `lower` is G^L and `upper` is G^U.
Interval binomial_bounds(std::int64_t n, double p, double eps);

/// Pr[Y <= t] for Y ~ Hyper(population N, successes K, draws n).
double hypergeom_cdf(std::int64_t N, std::int64_t K, std::int64_t n, std::int64_t t);

/// Smallest population fraction y = K/N with K >= ceil(N x) such that
/// Pr[Hyper(N, K, n) <= n x] <= eps; (N+1)/N when no such K exists.
double hypergeom_upper(std::int64_t N, std::int64_t n, double x, double eps);

/// Upper bound on the ones-fraction in the unsampled part of the population.
double q_upper(std::int64_t N, std::int64_t n, double x, double eps);

/// Smallest b in {ceil(N q)+1 .. N+1} with Pr[Bin(N,q) >= b] <= eps.
std::int64_t binom_threshold_B0(std::int64_t N, double q, double eps);

/// Smallest t in {k..N} with Pr[Bin(t, lambda) <= k] <= eps, or N+1.
std::int64_t binom_trials_inversion_V(std::int64_t k, double eps, double lambda,
                                      std::int64_t N);

}  // namespace geoqkd::stats

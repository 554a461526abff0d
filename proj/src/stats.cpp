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

#include "geoqkd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "geoqkd/errors.hpp"

namespace geoqkd::stats {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

// Binary search for the first index in [lo, hi] where pred holds, assuming
// pred is monotone (false...false true...true) and pred(hi) is true.
template <class Pred>
std::int64_t first_true(std::int64_t lo, std::int64_t hi, Pred pred) {
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

long double log_choose(std::int64_t a, std::int64_t b) {
  return std::lgamma(static_cast<long double>(a) + 1.0L) -
         std::lgamma(static_cast<long double>(b) + 1.0L) -
         std::lgamma(static_cast<long double>(a - b) + 1.0L);
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
  require(a > 0.0 && b > 0.0, "reg_inc_beta: shape parameters must be positive");
  require(x >= 0.0 && x <= 1.0, "reg_inc_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double inv_reg_inc_beta(double p, double a, double b) {
  require(a > 0.0 && b > 0.0, "inv_reg_inc_beta: shape parameters must be positive");
  require(p >= 0.0 && p <= 1.0, "inv_reg_inc_beta: probability must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return boost::math::ibeta_inv(a, b, p);
}

double binary_entropy(double x) {
  if (!(x > 0.0) || !(x < 1.0)) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double binomial_upper_tail(std::int64_t n, std::int64_t k, double p) {
  require(n >= 0, "binomial_upper_tail: n must be non-negative");
  require(p >= 0.0 && p <= 1.0, "binomial_upper_tail: p must lie in [0, 1]");
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return boost::math::ibeta(static_cast<double>(k), static_cast<double>(n - k + 1), p);
}

double binomial_cdf(std::int64_t n, std::int64_t k, double p) {
  require(n >= 0, "binomial_cdf: n must be non-negative");
  require(p >= 0.0 && p <= 1.0, "binomial_cdf: p must lie in [0, 1]");
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  return boost::math::ibetac(static_cast<double>(k + 1), static_cast<double>(n - k), p);
}

double poisson_binomial_lower(double n, double p_hat, double eps) {
  require(eps > 0.0 && eps <= 0.25, "poisson_binomial_lower: eps must lie in (0, 1/4]");
  require(n >= 1.0, "poisson_binomial_lower: n must be at least 1");
  require(p_hat >= 0.0 && p_hat <= 1.0, "poisson_binomial_lower: p_hat must lie in [0, 1]");
  const double a = n * p_hat;
  if (a == 0.0) return 0.0;
  const double b = n - a + 1.0;
  const double x_star = (a - 1.0) / n;
  const double eps_star = x_star > 0.0 ? reg_inc_beta(x_star, a, b) : 0.0;
  if (eps >= eps_star) return p_hat - (1.0 - eps) / (n * (1.0 - eps_star));
  return inv_reg_inc_beta(eps, a, b);
}

double poisson_binomial_upper(double n, double p_hat, double eps) {
  return 1.0 - poisson_binomial_lower(n, 1.0 - p_hat, eps);
}

Interval poisson_binomial_bounds(double n, double p_hat, double eps) {
  return {poisson_binomial_lower(n, p_hat, eps), poisson_binomial_upper(n, p_hat, eps)};
}

double binomial_upper_bound(std::int64_t n, double p, double eps) {
  require(n >= 1, "binomial_upper_bound: n must be positive");
  require(p >= 0.0 && p <= 1.0, "binomial_upper_bound: p must lie in [0, 1]");
  require(eps > 0.0, "binomial_upper_bound: eps must be positive");
  if (eps >= 1.0) return -1.0 / static_cast<double>(n);
  const std::int64_t k =
      first_true(0, n + 1, [&](std::int64_t k) { return binomial_upper_tail(n, k, p) <= eps; });
  return static_cast<double>(k) / static_cast<double>(n);
}

double binomial_lower_bound(std::int64_t n, double p, double eps) {
  require(n >= 1, "binomial_lower_bound: n must be positive");
  require(p >= 0.0 && p <= 1.0, "binomial_lower_bound: p must lie in [0, 1]");
  require(eps > 0.0, "binomial_lower_bound: eps must be positive");
  if (eps >= 1.0) return static_cast<double>(n + 1) / static_cast<double>(n);
  // First k whose CDF exceeds eps; the answer is one below it.
  const std::int64_t k =
      first_true(-1, n, [&](std::int64_t k) { return binomial_cdf(n, k, p) > eps; });
  return static_cast<double>(k - 1) / static_cast<double>(n);
}

Interval binomial_bounds(std::int64_t n, double p, double eps) {
  return {binomial_lower_bound(n, p, eps), binomial_upper_bound(n, p, eps)};
}

double hypergeom_cdf(std::int64_t N, std::int64_t K, std::int64_t n, std::int64_t t) {
  require(N >= 0 && K >= 0 && K <= N && n >= 0 && n <= N,
          "hypergeom_cdf: require 0 <= K <= N and 0 <= n <= N");
  const std::int64_t lo = std::max<std::int64_t>(0, n - (N - K));
  const std::int64_t hi = std::min(n, K);
  if (t < lo) return 0.0;
  if (t >= hi) return 1.0;

  const long double log_norm = log_choose(N, n);
  auto log_pmf = [&](std::int64_t k) {
    return log_choose(K, k) + log_choose(N - K, n - k) - log_norm;
  };
  const long double mode =
      (static_cast<long double>(n) + 1.0L) * (static_cast<long double>(K) + 1.0L) /
      (static_cast<long double>(N) + 2.0L);

  if (static_cast<long double>(t) <= mode) {
    // Lower tail, summed downward from t with the pmf ratio recurrence.
    long double term = std::exp(log_pmf(t));
    long double sum = term;
    for (std::int64_t k = t; k > lo; --k) {
      const long double ratio =
          static_cast<long double>(k) * static_cast<long double>(N - K - n + k) /
          (static_cast<long double>(K - k + 1) * static_cast<long double>(n - k + 1));
      term *= ratio;
      sum += term;
      if (term < sum * 1e-21L) break;
    }
    return static_cast<double>(std::min(sum, 1.0L));
  }
  // Upper tail from t+1 upward, complemented.
  long double term = std::exp(log_pmf(t + 1));
  long double sum = term;
  for (std::int64_t k = t + 1; k < hi; ++k) {
    const long double ratio =
        static_cast<long double>(K - k) * static_cast<long double>(n - k) /
        (static_cast<long double>(k + 1) * static_cast<long double>(N - K - n + k + 1));
    term *= ratio;
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  return static_cast<double>(std::max(0.0L, 1.0L - sum));
}

namespace {

// Decides hypergeom_cdf(N, K, n, t) <= eps. Below the mode the pmf ratios
// shrink as k falls, so the unsummed tail is bounded by a geometric series
// and the sum can stop as soon as the answer is settled.
bool hypergeom_cdf_at_most(std::int64_t N, std::int64_t K, std::int64_t n, std::int64_t t,
                           double eps) {
  const std::int64_t lo = std::max<std::int64_t>(0, n - (N - K));
  const std::int64_t hi = std::min(n, K);
  if (t < lo) return 0.0 <= eps;
  if (t >= hi) return 1.0 <= eps;
  const long double mode =
      (static_cast<long double>(n) + 1.0L) * (static_cast<long double>(K) + 1.0L) /
      (static_cast<long double>(N) + 2.0L);
  if (static_cast<long double>(t) > mode) return hypergeom_cdf(N, K, n, t) <= eps;
  const long double limit = eps;
  long double term =
      std::exp(log_choose(K, t) + log_choose(N - K, n - t) - log_choose(N, n));
  long double sum = term;
  for (std::int64_t k = t; k > lo; --k) {
    if (sum > limit) return false;
    const long double ratio =
        static_cast<long double>(k) * static_cast<long double>(N - K - n + k) /
        (static_cast<long double>(K - k + 1) * static_cast<long double>(n - k + 1));
    if (ratio < 1.0L && sum + term * ratio / (1.0L - ratio) <= limit) return true;
    term *= ratio;
    sum += term;
  }
  return sum <= limit;
}

}  // namespace

double hypergeom_upper(std::int64_t N, std::int64_t n, double x, double eps) {
  require(N >= 1 && n >= 1 && n <= N, "hypergeom_upper: require 1 <= n <= N");
  require(x >= 0.0 && x <= 1.0, "hypergeom_upper: x must lie in [0, 1]");
  require(eps > 0.0, "hypergeom_upper: eps must be positive");
  const auto t = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * x + 1e-9));
  auto k0 = static_cast<std::int64_t>(std::ceil(static_cast<double>(N) * x - 1e-9));
  k0 = std::clamp<std::int64_t>(k0, 0, N);
  auto ok = [&](std::int64_t K) { return hypergeom_cdf_at_most(N, K, n, t, eps); };
  const double Nd = static_cast<double>(N);
  if (!ok(N)) return (Nd + 1.0) / Nd;
  return static_cast<double>(first_true(k0, N, ok)) / Nd;
}

double q_upper(std::int64_t N, std::int64_t n, double x, double eps) {
  if (N == n) throw InputError("q_upper: complementary sample is empty (N == n)");
  const double h = hypergeom_upper(N, n, x, eps);
  return (static_cast<double>(N) * h - static_cast<double>(n) * x) /
         static_cast<double>(N - n);
}

std::int64_t binom_threshold_B0(std::int64_t N, double q, double eps) {
  require(N >= 1, "binom_threshold_B0: N must be positive");
  require(q >= 0.0 && q <= 1.0, "binom_threshold_B0: q must lie in [0, 1]");
  require(eps > 0.0, "binom_threshold_B0: eps must be positive");
  const auto start =
      static_cast<std::int64_t>(std::ceil(static_cast<double>(N) * q)) + 1;
  if (start > N) return N + 1;
  return first_true(start, N + 1,
                    [&](std::int64_t b) { return binomial_upper_tail(N, b, q) <= eps; });
}

std::int64_t binom_trials_inversion_V(std::int64_t k, double eps, double lambda,
                                      std::int64_t N) {
  require(lambda > 0.0 && lambda <= 1.0, "binom_trials_inversion_V: lambda must lie in (0, 1]");
  require(k >= 0 && k <= N, "binom_trials_inversion_V: require 0 <= k <= N");
  require(eps > 0.0, "binom_trials_inversion_V: eps must be positive");
  auto ok = [&](std::int64_t t) { return binomial_cdf(t, k, lambda) <= eps; };
  if (!ok(N)) return N + 1;
  return first_true(k, N, ok);
}

}  // namespace geoqkd::stats

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

#include "coverage.hpp"
#include "geoqkd/errors.hpp"
#include "geoqkd/stats.hpp"
#include "stat_oracles.hpp"

using namespace geoqkd;
using namespace geoqkd::stats;

TEST_CASE("incomplete beta endpoints and the uniform case") {
  CHECK(reg_inc_beta(0.0, 2.0, 3.0) == 0.0);
  CHECK(reg_inc_beta(1.0, 2.0, 3.0) == 1.0);
  CHECK(reg_inc_beta(0.5, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1.0), InputError);
  CHECK_THROWS_AS(reg_inc_beta(1.5, 1.0, 1.0), InputError);
}

TEST_CASE("incomplete beta agrees with quadrature") {
  // Frozen from the quadrature oracle: I_0.3(2,5) = 0.579825.
  const double q = oracle::reg_inc_beta(0.3, 2.0, 5.0);
  CHECK(std::abs(q - 0.579825) < 1e-6);
  CHECK(std::abs(reg_inc_beta(0.3, 2.0, 5.0) - q) < 1e-10);
  for (double a : {0.7, 3.5, 12.25}) {
    for (double b : {1.0, 4.5, 30.0}) {
      for (double x : {0.05, 0.4, 0.9}) {
        CHECK(std::abs(reg_inc_beta(x, a, b) - oracle::reg_inc_beta(x, a, b)) < 1e-10);
      }
    }
  }
}

TEST_CASE("inverse incomplete beta round trips") {
  for (double p : {1e-12, 1e-3, 0.2, 0.75}) {
    const double x = inv_reg_inc_beta(p, 3.3, 17.0);
    CHECK(reg_inc_beta(x, 3.3, 17.0) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("binary entropy conventions") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.11) == doctest::Approx(binary_entropy(0.89)).epsilon(1e-14));
}

TEST_CASE("Poisson-binomial bounds: trivial branches and domain") {
  CHECK(poisson_binomial_lower(50, 0.0, 0.1) == 0.0);
  CHECK(poisson_binomial_upper(50, 1.0, 0.1) == 1.0);
  CHECK_THROWS_AS(poisson_binomial_lower(50, 0.3, 0.3), InputError);
  CHECK_THROWS_AS(poisson_binomial_lower(50, 0.3, 0.0), InputError);
}

TEST_CASE("Poisson-binomial lower bound reproduces its branch selection") {
  const double n = 100, ph = 0.3, eps = 0.01;
  const double a = n * ph, b = n - a + 1;
  const double eps_star = oracle::reg_inc_beta((a - 1) / n, a, b);
  const double L = poisson_binomial_lower(n, ph, eps);
  if (eps <= eps_star) {
    CHECK(std::abs(L - oracle::inv_reg_inc_beta(eps, a, b)) < 1e-9);
  } else {
    CHECK(L == doctest::Approx(ph - (1 - eps) / (n * (1 - eps_star))));
  }
  // eps_star is close to 1/2 here, so the inverse-beta branch is the one taken.
  CHECK(eps_star > eps);
}

TEST_CASE("Poisson-binomial bounds bracket p_hat, complement bit-for-bit") {
  for (double n : {1.0, 7.0, 123.5, 1e4, 3.7e7}) {
    for (double ph : {0.0, 1e-6, 0.01, 0.3, 0.5, 0.99, 1.0}) {
      for (double eps : {1e-18, 1e-6, 0.1, 0.25}) {
        const auto b = poisson_binomial_bounds(n, ph, eps);
        CHECK(b.lower <= ph);
        CHECK(b.upper >= ph);
        CHECK(b.upper == 1.0 - poisson_binomial_lower(n, 1.0 - ph, eps));
      }
    }
  }
}

TEST_CASE("Poisson-binomial bounds are monotone in eps") {
  double prev_lo = -1.0, prev_up = 2.0;
  for (double eps : {1e-15, 1e-9, 1e-4, 0.01, 0.1, 0.25}) {
    const auto b = poisson_binomial_bounds(500.0, 0.12, eps);
    CHECK(b.lower >= prev_lo);
    CHECK(b.upper <= prev_up);
    prev_lo = b.lower;
    prev_up = b.upper;
  }
}

TEST_CASE("binomial bounds: sentinels and tail-sum oracle") {
  CHECK(binomial_upper_bound(20, 0.5, 1.0) == doctest::Approx(-1.0 / 20));
  CHECK(binomial_upper_bound(40, 0.0, 0.3) == doctest::Approx(1.0 / 40));
  const auto scan = oracle::binomial_bounds_scan(50, 0.2, 0.05);
  const auto b = binomial_bounds(50, 0.2, 0.05);
  CHECK(b.upper == scan.upper);
  CHECK(b.lower == scan.lower);
  for (int n : {1, 3, 10, 33}) {
    for (double p : {0.0, 0.07, 0.5, 0.93, 1.0}) {
      for (double eps : {1e-6, 0.01, 0.3, 0.9}) {
        const auto s = oracle::binomial_bounds_scan(n, p, eps);
        const auto g = binomial_bounds(n, p, eps);
        CHECK(g.upper == s.upper);
        CHECK(g.lower == s.lower);
      }
    }
  }
}

TEST_CASE("binomial bounds for large n stay around the mean") {
  const std::int64_t n = 500'000'000'000;
  const double p = 3e-7;
  const auto g = binomial_bounds(n, p, 1e-18);
  CHECK(g.upper > p);
  CHECK(g.lower < p);
  CHECK(g.upper < 1.2 * p);
}

TEST_CASE("hypergeometric bound against exhaustive scan") {
  CHECK(hypergeom_upper(10, 4, 0.0, 0.05) == oracle::hypergeom_upper_scan(10, 4, 0.0, 0.05));
  CHECK(hypergeom_upper(100, 30, 0.1, 0.01) ==
        oracle::hypergeom_upper_scan(100, 30, 0.1, 0.01));
  CHECK(hypergeom_upper(12, 5, 1.0, 0.2) == doctest::Approx(13.0 / 12.0));
  for (int N : {5, 17, 60}) {
    for (int n : {1, 4, N / 2, N - 1}) {
      for (double x : {0.0, 0.25, 0.5}) {
        for (double eps : {1e-4, 0.05, 0.29}) {
          CHECK(hypergeom_upper(N, n, x, eps) == oracle::hypergeom_upper_scan(N, n, x, eps));
        }
      }
    }
  }
  double prev = 10.0;
  for (double eps : {1e-9, 1e-5, 1e-3, 0.01, 0.1}) {
    const double h = hypergeom_upper(100, 30, 0.1, eps);
    CHECK(h <= prev);
    prev = h;
  }
  CHECK_THROWS_AS(q_upper(10, 10, 0.1, 0.1), InputError);
}

TEST_CASE("hypergeometric cdf matches explicit sums on both sides of the mode") {
  for (int t = 0; t <= 20; ++t) {
    const double ref = static_cast<double>(oracle::hypergeom_cdf_sum(80, 33, 20, t));
    CHECK(hypergeom_cdf(80, 33, 20, t) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("vacuum threshold B0 against linear scan") {
  CHECK(binom_threshold_B0(100, 0.0, 0.1) == 1);
  CHECK(binom_threshold_B0(30, 0.1, 0.05) == oracle::b0_scan(30, 0.1, 0.05));
  CHECK(binom_threshold_B0(30, 0.1, 1.0) == 4);
  for (int N : {1, 7, 50, 200}) {
    for (double q : {0.0, 0.003, 0.1, 0.45, 0.9}) {
      for (double eps : {1e-8, 0.01, 0.2}) {
        CHECK(binom_threshold_B0(N, q, eps) == oracle::b0_scan(N, q, eps));
      }
    }
  }
}

TEST_CASE("trial inversion V against linear scan") {
  CHECK(binom_trials_inversion_V(0, 0.5, 1.0, 10) == 1);
  CHECK(binom_trials_inversion_V(3, 0.01, 0.2, 10000) == oracle::v_scan(3, 0.01, 0.2, 10000));
  CHECK(binom_trials_inversion_V(5, 1.0, 0.3, 100) == 5);
  CHECK_THROWS_AS(binom_trials_inversion_V(1, 0.1, 0.0, 10), InputError);
  for (int N : {10, 60, 200}) {
    for (int k : {0, 2, 9}) {
      for (double lam : {0.05, 0.4, 1.0}) {
        for (double eps : {1e-6, 0.05}) {
          CHECK(binom_trials_inversion_V(k, eps, lam, N) == oracle::v_scan(k, eps, lam, N));
        }
      }
    }
  }
}

TEST_CASE("exhaustive coverage of the exact bounds") {
  const auto bin = oracle::binomial_coverage(25, {0.25, 0.1, 0.01});
  CHECK_MESSAGE(bin.violations == 0, bin.worst_case);
  const auto pb = oracle::poisson_binomial_coverage(25, {0.25, 0.1, 0.01});
  CHECK_MESSAGE(pb.violations == 0, pb.worst_case);
  const auto hy = oracle::hypergeom_coverage(20, {0.25, 0.05});
  CHECK_MESSAGE(hy.violations == 0, hy.worst_case);
}

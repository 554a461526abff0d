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

// Synthetic decoy-state data with known photon-number-resolved truth.
// Photon numbers, detections, intensity labels and errors are all sampled,
// so the realized single-photon counts differ from their expectations.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

struct SyntheticChannel {
  std::vector<double> mu, p_mu;
  double N_B = 0;
  std::vector<double> n, m;  // observed detections and errors per intensity
  double n1 = 0, m1 = 0;     // realized single-photon detections and errors
};

class DecoySynthesizer {
 public:
  explicit DecoySynthesizer(std::uint64_t seed) : rng_(seed) {}

  SyntheticChannel draw(int cutoff) {
    SyntheticChannel c;
    const double mu1 = uniform(0.2, 0.8);
    const double mu2 = uniform(0.02, 0.5 * mu1);
    c.mu = {mu1, mu2, coin(0.5) ? 0.0 : 1e-3};
    double w0 = uniform(0.4, 0.9), w1 = uniform(0.05, 0.4), w2 = uniform(0.02, 0.2);
    const double w = w0 + w1 + w2;
    c.p_mu = {w0 / w, w1 / w, w2 / w};
    c.N_B = std::round(std::pow(10.0, uniform(6.0, 10.0)));
    const double eta = std::pow(10.0, uniform(-5.0, -1.0));
    const double y0 = std::pow(10.0, uniform(-8.0, -4.0));
    const double e_mis = uniform(0.0, 0.05);

    const int top = cutoff + 1;  // index top collects everything above the cutoff
    std::vector<std::vector<double>> joint(3, std::vector<double>(top + 1, 0.0));
    std::vector<double> p(top + 1, 0.0);
    for (int j = 0; j < 3; ++j) {
      double term = std::exp(-c.mu[j]);
      double acc = 0.0;
      for (int i = 0; i < top; ++i) {
        if (i > 0) term *= c.mu[j] / i;
        joint[j][i] = c.p_mu[j] * term;
        acc += term;
      }
      joint[j][top] = c.p_mu[j] * std::max(0.0, 1.0 - acc);
      for (int i = 0; i <= top; ++i) p[i] += joint[j][i];
    }

    c.n.assign(3, 0.0);
    c.m.assign(3, 0.0);
    long long remaining = static_cast<long long>(c.N_B);
    double rest = 1.0;
    for (int i = 0; i <= top && remaining > 0; ++i) {
      const double share = i == top ? 1.0 : std::min(1.0, p[i] / rest);
      const long long N_i = binomial(remaining, share);
      remaining -= N_i;
      rest -= p[i];
      if (rest <= 0.0) rest = 1e-300;
      const double y = 1.0 - (1.0 - y0) * std::pow(1.0 - eta, i);
      const double e = y > 0.0 ? (0.5 * y0 + e_mis * (y - y0)) / y : 0.5;
      long long det = binomial(N_i, y);
      // Assign intensities from the Bayes posterior for this photon number.
      double cond_rest = 1.0;
      for (int j = 0; j < 3; ++j) {
        const double pj = p[i] > 0.0 ? joint[j][i] / p[i] : 0.0;
        const long long d = j == 2 ? det : binomial(det, std::min(1.0, pj / cond_rest));
        det -= d;
        cond_rest -= pj;
        if (cond_rest <= 0.0) cond_rest = 1e-300;
        const long long err = binomial(d, std::min(1.0, e));
        c.n[j] += static_cast<double>(d);
        c.m[j] += static_cast<double>(err);
        if (i == 1) {
          c.n1 += static_cast<double>(d);
          c.m1 += static_cast<double>(err);
        }
      }
    }
    return c;
  }

 private:
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  long long binomial(long long n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    return std::binomial_distribution<long long>(n, p)(rng_);
  }

  std::mt19937_64 rng_;
};

}  // namespace oracle

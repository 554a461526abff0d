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
#include <random>

#include "geoqkd/errors.hpp"
#include "geoqkd/receivers.hpp"
#include "mc_receivers.hpp"

using namespace geoqkd;
using namespace geoqkd::receivers;

namespace {

ReceiverInputs passive(double mu, double eta, double e, double ap, double pz, double px,
                       double s) {
  ReceiverInputs in;
  in.mu = mu;
  in.eta_sys = eta;
  in.e_mis = e;
  in.p_ap = ap;
  in.p_noise_Z = pz;
  in.p_noise_X = px;
  in.s = s;
  return in;
}

void check_within(double model, const oracle::McEstimate& mc, long count, const char* what) {
  const double sigma = mc.sigma(model);
  INFO(what << ": model " << model << " vs Monte Carlo " << mc.rate(count));
  CHECK(std::abs(mc.rate(count) - model) <= 3.0 * sigma);
}

constexpr std::uint64_t kSeed = 20261018;
constexpr long kTrials = 2'000'000;

}  // namespace

TEST_CASE("active receiver: trivial limits") {
  ReceiverInputs in;
  in.eta_sys = 0.3;
  auto r = active_statistics(in);
  CHECK(r.Q_Z == 0.0);
  CHECK(r.E_Z == 0.0);
  CHECK(r.P_empty == 1.0);

  in.mu = 0.7;
  r = active_statistics(in);
  CHECK(r.Q_Z == doctest::Approx(-std::expm1(-0.21)).epsilon(1e-14));
  CHECK(r.E_Z == 0.0);
  CHECK(r.Q_X == r.Q_Z);
  CHECK(r.Q_mc == 0.0);
}

TEST_CASE("active receiver: closed form at a reference point") {
  ReceiverInputs in;
  in.mu = 0.5;
  in.eta_sys = 0.01;
  in.p_noise = 1e-6;
  in.e_mis = 0.01;
  in.p_ap = 0.02;
  const auto r = active_statistics(in);
  const double x = 0.005;
  const double d = 1.0 - (1 - 1e-6) * (1 - 1e-6) * std::exp(-x);
  const double pc = (1 - 1e-6) * std::exp(-x * 0.99) * (1 - 0.02 * d);
  const double pw = (1 - 1e-6) * std::exp(-x * 0.01) * (1 - 0.02 * d);
  CHECK(r.Q_Z == doctest::Approx(1 - pc * pw).epsilon(1e-13));
  CHECK(r.E_Z == doctest::Approx(0.5 * (1 - pw) * (1 + pc)).epsilon(1e-13));
  // Frozen from the expression above.
  CHECK(r.Q_Z == doctest::Approx(5.1953e-3).epsilon(1e-4));
}

TEST_CASE("active receiver agrees with the event Monte Carlo") {
  ReceiverInputs in;
  in.mu = 0.5;
  in.eta_sys = 0.01;
  in.p_noise = 1e-6;
  in.e_mis = 0.01;
  in.p_ap = 0.02;
  const auto r = active_statistics(in);
  oracle::ReceiverSimulator sim(kSeed);
  const auto mc =
      sim.run(oracle::McReceiver::active, {0.5, 0.01, 0.01, 0.02, 1e-6, 0.0, 0.0}, kTrials);
  check_within(r.Q_Z, mc, mc.q_z, "Q");
  check_within(r.E_Z, mc, mc.e_z, "E");
}

TEST_CASE("asymmetric passive receiver: trivial limits and arm symmetry") {
  auto r = passive_asym_statistics(passive(0.0, 0.2, 0.01, 0.0, 0.0, 0.0, 0.3));
  CHECK(r.P_empty == 1.0);
  CHECK(r.Q_Z == 0.0);
  CHECK(r.Q_X == 0.0);
  CHECK(r.Q_mc == 0.0);

  r = passive_asym_statistics(passive(0.4, 0.1, 0.02, 0.01, 1e-5, 1e-5, 0.5));
  CHECK(r.Q_Z == r.Q_X);
  CHECK(r.E_Z == r.E_X);

  const auto a = passive_asym_statistics(passive(0.4, 0.1, 0.02, 0.01, 3e-5, 1e-6, 0.2));
  const auto b = passive_asym_statistics(passive(0.4, 0.1, 0.02, 0.01, 1e-6, 3e-5, 0.8));
  CHECK(a.Q_Z == doctest::Approx(b.Q_X).epsilon(1e-14));
  CHECK(a.E_Z == doctest::Approx(b.E_X).epsilon(1e-14));
  CHECK(a.Q_mc == doctest::Approx(b.Q_mc).epsilon(1e-12));
  CHECK(a.P_empty == doctest::Approx(b.P_empty).epsilon(1e-14));

  CHECK_THROWS_AS(passive_asym_statistics(passive(0.4, 0.1, 0.0, 0.0, 0.0, 0.0, 1.0)),
                  InputError);
}

TEST_CASE("passive completeness holds over a random grid") {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const auto in = passive(3.0 * u(rng), u(rng), 0.5 * u(rng), 0.1 * u(rng),
                            std::pow(10.0, -8 * u(rng)), std::pow(10.0, -8 * u(rng)),
                            0.01 + 0.98 * u(rng));
    for (const auto& r : {passive_asym_statistics(in), passive_sym_statistics(in)}) {
      CHECK(std::abs(r.P_empty + r.Q_Z + r.Q_X + r.Q_mc - 1.0) < 1e-12);
      CHECK(r.E_Z <= r.Q_Z);
      CHECK(r.E_X <= r.Q_X);
      CHECK(r.Q_mc >= 0.0);
    }
  }
}

TEST_CASE("asymmetric passive receiver agrees with the event Monte Carlo") {
  const auto in = passive(0.6, 0.005, 0.005, 0.0, 1e-8, 1e-8, 0.3);
  const auto r = passive_asym_statistics(in);
  oracle::ReceiverSimulator sim(kSeed);
  const auto mc =
      sim.run(oracle::McReceiver::passive_asym, {0.6, 0.005, 0.005, 0.0, 1e-8, 1e-8, 0.3},
              kTrials);
  check_within(r.Q_Z, mc, mc.q_z, "Q_Z");
  check_within(r.Q_X, mc, mc.q_x, "Q_X");
  check_within(r.E_Z, mc, mc.e_z, "E_Z");
  check_within(r.E_X, mc, mc.e_x, "E_X");
  check_within(r.Q_mc, mc, mc.mc, "Q_mc");
  check_within(r.P_empty, mc, mc.empty, "P_empty");

  const auto noisy = passive(0.8, 0.2, 0.03, 0.05, 2e-3, 5e-4, 0.35);
  const auto rn = passive_asym_statistics(noisy);
  const auto mn = sim.run(oracle::McReceiver::passive_asym,
                          {0.8, 0.2, 0.03, 0.05, 2e-3, 5e-4, 0.35}, kTrials);
  check_within(rn.Q_Z, mn, mn.q_z, "Q_Z");
  check_within(rn.E_Z, mn, mn.e_z, "E_Z");
  check_within(rn.Q_X, mn, mn.q_x, "Q_X");
  check_within(rn.E_X, mn, mn.e_x, "E_X");
  check_within(rn.Q_mc, mn, mn.mc, "Q_mc");
}

TEST_CASE("symmetric passive receiver: limits and Monte Carlo") {
  auto r = passive_sym_statistics(passive(0.0, 0.5, 0.02, 0.0, 0.0, 0.0, 0.5));
  CHECK(r.Q_Z == 0.0);
  r = passive_sym_statistics(passive(0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5));
  CHECK(r.E_Z == 0.0);
  CHECK(r.Q_Z == r.Q_X);

  const auto in = passive(0.7, 0.15, 0.02, 0.03, 1e-3, 1e-3, 0.5);
  r = passive_sym_statistics(in);
  oracle::ReceiverSimulator sim(kSeed + 1);
  const auto mc =
      sim.run(oracle::McReceiver::passive_sym, {0.7, 0.15, 0.02, 0.03, 1e-3, 1e-3, 0.5}, kTrials);
  check_within(r.Q_Z, mc, mc.q_z, "Q_Z");
  check_within(r.E_Z, mc, mc.e_z, "E_Z");
  check_within(r.Q_X, mc, mc.q_x, "Q_X");
  check_within(r.E_X, mc, mc.e_x, "E_X");
  check_within(r.Q_mc, mc, mc.mc, "Q_mc");
}

TEST_CASE("QBER limits and monotonicity") {
  ReceiverInputs in;
  in.mu = 0.5;
  in.eta_sys = 1e-3;
  in.e_mis = 0.02;
  auto r = active_statistics(in);
  CHECK(r.E_Z / r.Q_Z == doctest::Approx(0.02).epsilon(1e-3));
  in.p_noise = 1.0 - 1e-12;
  r = active_statistics(in);
  CHECK(r.E_Z / r.Q_Z == doctest::Approx(0.5).epsilon(1e-6));

  in.p_noise = 1e-6;
  in.p_ap = 0.01;
  double prev_q = -1.0;
  for (double mu : {0.0, 0.1, 0.3, 0.9, 2.0}) {
    in.mu = mu;
    const double q = active_statistics(in).Q_Z;
    CHECK(q >= prev_q);
    prev_q = q;
  }
  prev_q = -1.0;
  for (double pn : {0.0, 1e-8, 1e-5, 1e-2, 0.3}) {
    in.p_noise = pn;
    const double q = active_statistics(in).Q_Z;
    CHECK(q >= prev_q);
    prev_q = q;
  }
  double prev_e = -1.0;
  for (double e : {0.0, 0.01, 0.1, 0.3, 0.5}) {
    in.e_mis = e;
    const double err = active_statistics(in).E_Z;
    CHECK(err >= prev_e);
    prev_e = err;
  }
}

TEST_CASE("vacuum single-click parameter") {
  CHECK(vacuum_single_click(0.9, 0.0) == 0.0);
  CHECK(vacuum_single_click(0.9, 1e-8) == doctest::Approx(0.9 * 2e-8 * std::pow(1 - 1e-8, 3)));
  CHECK_THROWS_AS(vacuum_single_click(1.2, 1e-8), InputError);
}

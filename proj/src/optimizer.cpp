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

#include "geoqkd/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "geoqkd/config.hpp"
#include "geoqkd/errors.hpp"
#include "geoqkd/geometry.hpp"

namespace geoqkd::pipeline {
namespace {

constexpr double kFail = -std::numeric_limits<double>::max();

double lerp(double lo, double hi, double u) { return lo + (hi - lo) * u; }
double log_lerp(double lo, double hi, double u) {
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t n, int threads, F fn) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Search score. Equals the continuous key length where the phase-error bound
// exists and is below one half; elsewhere it keeps a slope toward usable
// statistics instead of a flat plateau.
double search_score(const security::KeyResult& k, Architecture arch) {
  if (arch == Architecture::passive_sym || k.status == "ok" || k.status == "zero_key") {
    return k.ell_continuous;
  }
  const double base = std::min(k.ell_continuous, -1.0);
  if (k.status == "phase_error_saturated") {
    return base - k.bounds.n1Z_L * (k.phi1_U - 0.5);
  }
  const double sub_Z = k.B0_Z + k.V_mc, sub_X = k.B0_X + k.V_mc;
  const double deficit = std::max(0.0, 1.0 + sub_Z - k.raw_bounds.n1Z_L) +
                         std::max(0.0, 1.0 + sub_X - k.raw_bounds.n1X_L);
  return base * (2.0 + deficit);
}

// Evaluates the search objective and remembers the best point seen.
class Objective {
 public:
  Objective(const Scenario& base, const tables::DataSet* data) : base_(base), data_(data) {}

  double operator()(const std::vector<double>& u) {
    ++evaluations;
    Scenario s = base_;
    double value = kFail;
    try {
      apply_parameters(s, u);
      auto r = evaluate_point(s, data_);
      value = search_score(r.key, s.protocol.architecture);
      if (!have_best || better(r, value)) {
        have_best = true;
        best_value = value;
        best = std::move(r);
        best_unit = u;
        best_scenario = s;
      }
    } catch (const InputError&) {
      value = kFail;
    }
    return value;
  }

  int evaluations = 0;
  bool have_best = false;
  double best_value = kFail;
  PointResult best;
  std::vector<double> best_unit;
  Scenario best_scenario;

 private:
  bool better(const PointResult& r, double value) const {
    if (r.key.ell != best.key.ell) return r.key.ell > best.key.ell;
    return value > best_value;
  }
  const Scenario& base_;
  const tables::DataSet* data_;
};

// Nelder-Mead restricted to the unit cube by clamping.
void nelder_mead(Objective& f, std::vector<double> x0, int budget, double tol) {
  const std::size_t d = x0.size();
  auto clamp = [](std::vector<double> v) {
    for (double& x : v) x = std::clamp(x, 0.0, 1.0);
    return v;
  };
  std::vector<std::vector<double>> pts{clamp(x0)};
  for (std::size_t i = 0; i < d; ++i) {
    auto p = pts[0];
    p[i] += p[i] < 0.5 ? 0.1 : -0.1;
    pts.push_back(clamp(p));
  }
  std::vector<double> val;
  for (const auto& p : pts) val.push_back(-f(p));
  const int stop = f.evaluations + budget;

  std::vector<std::size_t> order(d + 1);
  while (f.evaluations < stop) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const auto& best = pts[order.front()];
    double spread = 0.0;
    for (const auto& p : pts) {
      for (std::size_t i = 0; i < d; ++i) spread = std::max(spread, std::abs(p[i] - best[i]));
    }
    if (spread < tol) break;

    const std::size_t worst = order.back(), second = order[d - 1];
    std::vector<double> centroid(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < d; ++i) centroid[i] += pts[order[k]][i] / d;
    }
    auto along = [&](double t) {
      std::vector<double> p(d);
      for (std::size_t i = 0; i < d; ++i) p[i] = centroid[i] + t * (pts[worst][i] - centroid[i]);
      return clamp(p);
    };
    const auto xr = along(-1.0);
    const double fr = -f(xr);
    if (fr < val[order.front()]) {
      const auto xe = along(-2.0);
      const double fe = -f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    const auto xc = along(outside ? -0.5 : 0.5);
    const double fc = -f(xc);
    if (fc < (outside ? fr : val[worst])) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    const auto keep = pts[order.front()];
    for (std::size_t k = 1; k <= d; ++k) {
      auto& p = pts[order[k]];
      for (std::size_t i = 0; i < d; ++i) p[i] = keep[i] + 0.5 * (p[i] - keep[i]);
      val[order[k]] = -f(p);
    }
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
  return s;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '"') c = ';';
  }
  return s;
}

}  // namespace

void SearchConfig::validate() const {
  if (grid_points < 1) throw InputError("search: grid_points must be at least 1");
  if (max_evaluations < 0) throw InputError("search: max_evaluations must be non-negative");
  if (!(tolerance > 0.0)) throw InputError("search: tolerance must be positive");
  if (restarts < 0) throw InputError("search: restarts must be non-negative");
  if (starts < 1) throw InputError("search: starts must be at least 1");
  for (double u : warm_start) {
    if (!(u >= 0.0 && u <= 1.0)) throw InputError("search: warm start must lie in the unit cube");
  }
}

std::vector<std::string> parameter_names(Architecture a) {
  std::vector<std::string> n{"mu_signal", "decoy_ratio", "p_signal", "decoy_share"};
  switch (a) {
    case Architecture::active_asym: n.push_back("p_X"); break;
    case Architecture::passive_asym:
      n.push_back("p_X");
      n.push_back("s");
      break;
    case Architecture::passive_sym: n.push_back("r"); break;
  }
  return n;
}

void apply_parameters(Scenario& s, const std::vector<double>& u) {
  auto& p = s.protocol;
  if (u.size() != parameter_names(p.architecture).size()) {
    throw InputError("optimizer: parameter vector has the wrong length");
  }
  if (p.mu.size() != 3) throw InputError("optimizer: expects exactly three intensities");
  p.mu[0] = lerp(0.05, 1.0, u[0]);
  p.mu[1] = p.mu[0] * lerp(0.02, 0.7, u[1]);
  p.p_mu[0] = lerp(0.3, 0.97, u[2]);
  const double rest = 1.0 - p.p_mu[0];
  p.p_mu[1] = rest * lerp(0.1, 0.9, u[3]);
  p.p_mu[2] = rest - p.p_mu[1];
  switch (p.architecture) {
    case Architecture::active_asym: p.p_X = log_lerp(0.005, 0.5, u[4]); break;
    case Architecture::passive_asym:
      p.p_X = log_lerp(0.005, 0.5, u[4]);
      p.s = log_lerp(0.005, 0.5, u[5]);
      break;
    case Architecture::passive_sym: p.r = log_lerp(0.01, 0.5, u[4]); break;
  }
}

OptimizationResult optimize_key_rate(const Scenario& s, const tables::DataSet* data,
                                     const SearchConfig& search) {
  search.validate();
  s.validate();
  const std::size_t d = parameter_names(s.protocol.architecture).size();
  if (s.protocol.mu.size() != 3) throw InputError("optimizer: expects exactly three intensities");
  // Link errors are not parameter dependent; surface them before searching.
  evaluate_link(s, data);

  Objective f(s, data);
  OptimizationResult out;
  std::vector<std::vector<double>> starts;
  if (search.warm_start.size() == d) {
    starts.push_back(search.warm_start);
  } else {
    std::vector<std::pair<double, std::vector<double>>> scored;
    std::vector<double> u(d);
    std::vector<int> idx(d, 0);
    const int g = search.grid_points;
    while (true) {
      for (std::size_t i = 0; i < d; ++i) u[i] = (idx[i] + 0.5) / g;
      scored.emplace_back(f(u), u);
      std::size_t k = 0;
      while (k < d && ++idx[k] == g) idx[k++] = 0;
      if (k == d) break;
    }
    // Stable order keeps ties in grid order.
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    out.grid_best = scored.front().first;
    for (std::size_t i = 0; i < scored.size() && static_cast<int>(starts.size()) < search.starts;
         ++i) {
      starts.push_back(scored[i].second);
    }
  }
  for (const auto& x : starts) nelder_mead(f, x, search.max_evaluations, search.tolerance);
  std::mt19937_64 rng(search.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < search.restarts; ++k) {
    std::vector<double> x(d);
    for (double& v : x) v = unif(rng);
    nelder_mead(f, x, search.max_evaluations, search.tolerance);
  }

  out.evaluations = f.evaluations;
  if (!f.have_best) {
    out.scenario = s;
    out.best.link = evaluate_link(s, data);
    out.best.protocol = s.protocol;
    out.best.key.status = "no_valid_parameters";
    out.diagnostic = "no parameter point could be evaluated";
    return out;
  }
  out.unit = f.best_unit;
  out.best = std::move(f.best);
  out.scenario = f.best_scenario;
  if (!(out.best.key.ell > 0.0)) out.diagnostic = "no positive key in the search region";
  return out;
}

// --- sweeps --------------------------------------------------------------

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    v[i] = log_scale ? log_lerp(min, max, t) : lerp(min, max, t);
  }
  if (steps > 1) v.back() = max;
  return v;
}

void SweepGrid::validate() const {
  if (axes.empty()) throw InputError("grid: at least one axis is required");
  for (const auto& a : axes) {
    if (a.name.empty()) throw InputError("grid: axis name is empty");
    if (a.steps < 2) throw InputError("grid: axis '" + a.name + "' needs at least two steps");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw InputError("grid: axis '" + a.name + "' has non-finite limits");
    }
    if (a.log_scale && !(a.min > 0.0 && a.max > 0.0)) {
      throw InputError("grid: log axis '" + a.name + "' needs positive limits");
    }
  }
  if (!overrides.is_object()) throw InputError("grid: overrides must be an object");
}

SweepGrid SweepGrid::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("grid: document must be an object");
  SweepGrid g;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "axes" && k != "overrides" && k != "optimize" && k != "schema") {
      throw InputError("grid: unknown key '" + k + "'");
    }
  }
  try {
    if (j.contains("optimize")) g.optimize = j.at("optimize").get<bool>();
    if (j.contains("overrides")) g.overrides = j.at("overrides");
    if (!j.contains("axes") || !j.at("axes").is_array()) {
      throw InputError("grid: 'axes' must be an array");
    }
    for (std::size_t i = 0; i < j.at("axes").size(); ++i) {
      const auto& a = j.at("axes")[i];
      const std::string path = "axes[" + std::to_string(i) + "]";
      if (!a.is_object()) throw InputError("grid: " + path + " must be an object");
      SweepAxis ax;
      for (auto it = a.begin(); it != a.end(); ++it) {
        const auto& k = it.key();
        if (k != "name" && k != "min" && k != "max" && k != "steps" && k != "scale") {
          throw InputError("grid: unknown key '" + path + "." + k + "'");
        }
      }
      ax.name = a.at("name").get<std::string>();
      ax.min = a.at("min").get<double>();
      ax.max = a.at("max").get<double>();
      ax.steps = a.at("steps").get<int>();
      const std::string scale = a.value("scale", std::string("lin"));
      if (scale != "lin" && scale != "log") {
        throw InputError("grid: " + path + ".scale must be 'lin' or 'log'");
      }
      ax.log_scale = scale == "log";
      g.axes.push_back(ax);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("grid: ") + e.what());
  }
  g.validate();
  return g;
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, const nlohmann::json& base_config,
                                const tables::DataSet* data, const SearchConfig& search,
                                int threads) {
  grid.validate();
  search.validate();
  std::vector<std::vector<double>> values;
  std::size_t total = 1;
  for (const auto& a : grid.axes) {
    values.push_back(a.values());
    total *= values.back().size();
  }
  const std::size_t inner = values.back().size();
  const std::size_t lines = total / inner;
  nlohmann::json base = base_config;
  for (auto it = grid.overrides.begin(); it != grid.overrides.end(); ++it) {
    config::set_path(base, it.key(), it.value());
  }

  std::vector<SweepRow> rows(total);
  parallel_for(lines, resolve_threads(threads), [&](std::size_t line) {
    std::vector<double> warm;
    for (std::size_t k = 0; k < inner; ++k) {
      const std::size_t index = line * inner + k;
      SweepRow& row = rows[index];
      row.index = index;
      std::size_t rem = index;
      row.axis_values.assign(values.size(), 0.0);
      for (std::size_t a = values.size(); a-- > 0;) {
        row.axis_values[a] = values[a][rem % values[a].size()];
        rem /= values[a].size();
      }
      try {
        nlohmann::json cfg = base;
        for (std::size_t a = 0; a < values.size(); ++a) {
          config::set_path(cfg, grid.axes[a].name, row.axis_values[a]);
        }
        const Scenario s = config::scenario_from_json(cfg);
        if (grid.optimize) {
          SearchConfig sc = search;
          sc.warm_start = warm;
          auto opt = optimize_key_rate(s, data, sc);
          row.result = std::move(opt.best);
          row.unit = opt.unit;
          if (!opt.unit.empty()) warm = opt.unit;
        } else {
          row.result = evaluate_point(s, data);
        }
        row.status = row.result.key.status;
      } catch (const std::exception& e) {
        row.failed = true;
        row.status = sanitize(e.what());
      }
    }
  });
  return rows;
}

void write_sweep_table(std::ostream& os, const SweepGrid& grid, const std::vector<SweepRow>& rows) {
  os << "# geoqkd sweep, schema v1\n";
  os << "index";
  for (const auto& a : grid.axes) os << ',' << a.name;
  os << ",status,ell,rate,ell_continuous,n1Z_L,n1Z_U,n1X_L,n1X_U,m1X_L,m1X_U,phi1_U,lambda_EC,"
        "ell_Z,ell_X,B0_Z,B0_X,V_mc,lp_fallback,loss_db,eta_sys,p_noise,p_noise_Z,p_noise_X,"
        "zenith_deg,rho_km,mu,p_mu,p_X,s,r,truncation\n";
  for (const auto& r : rows) {
    os << r.index;
    for (double v : r.axis_values) os << ',' << fmt(v);
    const auto& k = r.result.key;
    const auto& b = k.bounds;
    const auto& l = r.result.link;
    const auto& p = r.result.protocol;
    os << ',' << (r.failed ? "error: " + r.status : r.status);
    for (double v : {k.ell, k.rate, k.ell_continuous, b.n1Z_L, b.n1Z_U, b.n1X_L, b.n1X_U, b.m1X_L,
                     b.m1X_U, k.phi1_U, k.lambda_EC, k.ell_Z, k.ell_X, k.B0_Z, k.B0_X, k.V_mc}) {
      os << ',' << fmt(v);
    }
    os << ',' << (k.lp_fallback ? 1 : 0);
    for (double v : {l.loss_db, l.eta_sys, l.p_noise, l.p_noise_Z, l.p_noise_X, l.zenith_deg,
                     l.rho_km}) {
      os << ',' << fmt(v);
    }
    os << ',' << join(p.mu) << ',' << join(p.p_mu) << ',' << fmt(p.p_X) << ',' << fmt(p.s)
       << ',' << fmt(p.r) << ',' << p.truncation << '\n';
  }
}

// --- annual yield --------------------------------------------------------

double yield_from_rates(const AnnualYieldCell& c, double source_rate_hz) {
  const double f[3] = {c.f_clear, c.f_thin, c.f_thick};
  double per_pulse = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto& r = c.rates[k];
    per_pulse += f[k] * (kNightFraction * r[0] + kDayRegimeFraction * (r[1] + r[2] + r[3]));
  }
  return source_rate_hz * constants::seconds_per_year * per_pulse;
}

AnnualYieldCell annual_yield(const tables::CloudCell& cell, const Scenario& base,
                             const tables::DataSet& data, const SearchConfig& search) {
  AnnualYieldCell out;
  out.latitude_deg = cell.latitude_deg;
  out.longitude_deg = cell.longitude_deg;
  out.f_clear = cell.f_clear;
  out.f_thin = cell.f_thin;
  out.f_thick = cell.f_thick;
  Scenario s = base;
  s.geometry.ogs_latitude_deg = cell.latitude_deg;
  s.geometry.ogs_longitude_deg = cell.longitude_deg;
  s.zenith_deg.reset();
  try {
    out.zenith_deg = geometry::rad2deg(geometry::zenith_angle(s.geometry));
  } catch (const BelowHorizonError&) {
    out.status = "below_horizon";
    return out;
  }
  const CloudRegime regimes[3] = {CloudRegime::clear, CloudRegime::thin, CloudRegime::thick};
  const Illumination lights[4] = {Illumination::night, Illumination::day_low,
                                  Illumination::day_moderate, Illumination::day_high};
  std::vector<double> warm;
  for (int l = 0; l < 4; ++l) {
    for (int k = 0; k < 3; ++k) {
      // More cloud or brighter sky only adds loss or noise; a zero rate stays zero.
      if (k > 0 && out.rates[k - 1][l] <= 0.0) continue;
      if (l > 0 && out.rates[k][l - 1] <= 0.0) continue;
      Scenario point = s;
      point.cloud = regimes[k];
      point.illumination = lights[l];
      SearchConfig sc = search;
      sc.warm_start = warm;
      const auto opt = optimize_key_rate(point, &data, sc);
      out.rates[k][l] = opt.best.key.rate;
      if (opt.best.key.rate > 0.0) warm = opt.unit;
    }
  }
  out.yield_bits = yield_from_rates(out, base.source_rate_hz);
  return out;
}

std::vector<tables::CloudCell> subsample_grid(const std::vector<tables::CloudCell>& cells,
                                              int stride) {
  if (stride < 1) throw InputError("annual: stride must be at least 1");
  if (cells.empty()) return {};
  double lat0 = cells.front().latitude_deg, lon0 = cells.front().longitude_deg;
  for (const auto& c : cells) {
    lat0 = std::min(lat0, c.latitude_deg);
    lon0 = std::min(lon0, c.longitude_deg);
  }
  std::vector<tables::CloudCell> out;
  for (const auto& c : cells) {
    const long dl = std::lround(c.latitude_deg - lat0), dn = std::lround(c.longitude_deg - lon0);
    if (dl % stride == 0 && dn % stride == 0) out.push_back(c);
  }
  return out;
}

std::vector<AnnualYieldCell> annual_grid(const std::vector<tables::CloudCell>& cells,
                                         const Scenario& base, const tables::DataSet& data,
                                         const SearchConfig& search, int threads) {
  std::vector<AnnualYieldCell> out(cells.size());
  std::vector<std::string> errors(cells.size());
  parallel_for(cells.size(), resolve_threads(threads), [&](std::size_t i) {
    try {
      out[i] = annual_yield(cells[i], base, data, search);
    } catch (const std::exception& e) {
      out[i].latitude_deg = cells[i].latitude_deg;
      out[i].longitude_deg = cells[i].longitude_deg;
      out[i].status = "error: " + sanitize(e.what());
    }
  });
  return out;
}

void write_annual_table(std::ostream& os, const std::vector<AnnualYieldCell>& cells) {
  os << "# geoqkd annual yield, schema v1\n";
  os << "lat,lon,f_clear,f_thin,f_thick,zenith_deg,status,yield_bits_per_year";
  for (const char* k : {"clear", "thin", "thick"}) {
    for (const char* l : {"night", "day_low", "day_moderate", "day_high"}) {
      os << ",rate_" << k << '_' << l;
    }
  }
  os << '\n';
  for (const auto& c : cells) {
    os << fmt(c.latitude_deg) << ',' << fmt(c.longitude_deg) << ',' << fmt(c.f_clear) << ','
       << fmt(c.f_thin) << ',' << fmt(c.f_thick) << ',' << fmt(c.zenith_deg) << ',' << c.status
       << ',' << fmt(c.yield_bits);
    for (const auto& row : c.rates) {
      for (double r : row) os << ',' << fmt(r);
    }
    os << '\n';
  }
}

// --- trusted node --------------------------------------------------------

TwoStationResult two_station_key(const Scenario& a, const Scenario& b,
                                 const tables::DataSet* data, const SearchConfig& search) {
  TwoStationResult out;
  Scenario sa = a, sb = b;
  sa.protocol.N = a.protocol.N / 2.0;
  sb.protocol.N = b.protocol.N / 2.0;
  out.a = optimize_key_rate(sa, data, search);
  out.b = optimize_key_rate(sb, data, search);
  out.ell = std::min(out.a.best.key.ell, out.b.best.key.ell);
  out.rate = out.ell / a.protocol.N;
  return out;
}

int resolve_threads(int requested) {
  if (requested < 0) throw InputError("threads must be non-negative");
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace geoqkd::pipeline

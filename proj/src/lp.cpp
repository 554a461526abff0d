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

#include "geoqkd/lp.hpp"

#include <algorithm>
#include <cmath>

#include "geoqkd/errors.hpp"

namespace geoqkd::lp {

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

int LinearProgram::add_variable(double lo, double hi, double c) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_variables() - 1;
}

void LinearProgram::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
  coeffs.resize(cost.size(), 0.0);
  rows.push_back({std::move(coeffs), sense, rhs});
}

namespace {

// Tableau over shifted variables y = x - lower, each in [0, width].
class Tableau {
 public:
  Tableau(int m, int n) : m_(m), n_(n), t_(m, std::vector<double>(n, 0.0)), beta_(m, 0.0),
                          basis_(m, -1), width_(n, kInf), at_upper_(n, false) {}

  int m_, n_;
  std::vector<std::vector<double>> t_;  // B^-1 A
  std::vector<double> beta_;            // basic values
  std::vector<int> basis_;
  std::vector<double> width_;
  std::vector<bool> at_upper_;

  bool is_basic(int j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  void pivot(int r, int j) {
    const double p = t_[r][j];
    for (double& v : t_[r]) v /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t_[i][j];
      if (f == 0.0) continue;
      for (int k = 0; k < n_; ++k) t_[i][k] -= f * t_[r][k];
      t_[i][j] = 0.0;
    }
    basis_[r] = j;
  }

  // Minimizes cost over the current basis. Returns optimal, unbounded or iteration_limit.
  Status run(const std::vector<double>& cost, double tol, int max_iter, int& iters) {
    std::vector<double> d(n_);
    while (true) {
      if (iters >= max_iter) return Status::iteration_limit;
      for (int j = 0; j < n_; ++j) {
        double z = cost[j];
        for (int i = 0; i < m_; ++i) z -= cost[basis_[i]] * t_[i][j];
        d[j] = z;
      }
      int enter = -1;
      double dir = 0.0;
      for (int j = 0; j < n_; ++j) {
        if (is_basic(j) || width_[j] <= 0.0) continue;
        if (!at_upper_[j] && d[j] < -tol) {
          enter = j;
          dir = 1.0;
          break;
        }
        if (at_upper_[j] && d[j] > tol) {
          enter = j;
          dir = -1.0;
          break;
        }
      }
      if (enter < 0) return Status::optimal;
      ++iters;

      // Ratio test.
      double theta = width_[enter];
      int leave = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        const double a = t_[i][enter] * dir;
        if (std::abs(a) <= tol) continue;
        double lim;
        bool to_upper;
        if (a > 0.0) {
          lim = std::max(beta_[i], 0.0) / a;
          to_upper = false;
        } else {
          const double w = width_[basis_[i]];
          if (!std::isfinite(w)) continue;
          lim = std::max(w - beta_[i], 0.0) / -a;
          to_upper = true;
        }
        // Ties prefer the larger pivot, then the smaller variable index.
        bool take = lim < theta - 1e-15;
        if (!take && leave >= 0 && std::abs(lim - theta) <= 1e-15) {
          const double cur = std::abs(t_[leave][enter]);
          take = std::abs(a) > 10.0 * cur ||
                 (std::abs(a) * 10.0 >= cur && basis_[i] < basis_[leave]);
        }
        if (take) {
          theta = lim;
          leave = i;
          leave_to_upper = to_upper;
        }
      }
      if (!std::isfinite(theta)) return Status::unbounded;

      for (int i = 0; i < m_; ++i) beta_[i] -= theta * dir * t_[i][enter];
      if (leave < 0) {
        at_upper_[enter] = !at_upper_[enter];
        continue;
      }
      const double entered = (at_upper_[enter] ? width_[enter] : 0.0) + dir * theta;
      const int old = basis_[leave];
      at_upper_[old] = leave_to_upper;
      at_upper_[enter] = false;
      pivot(leave, enter);
      beta_[leave] = entered;
    }
  }
};

}  // namespace

Solution solve(const LinearProgram& lp, Objective sense, const SolverOptions& opt) {
  const int n = lp.num_variables();
  const int m = static_cast<int>(lp.rows.size());
  if (lp.lower.size() != static_cast<std::size_t>(n) ||
      lp.upper.size() != static_cast<std::size_t>(n)) {
    throw InputError("lp: bound vectors must match the number of variables");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower[j])) throw InputError("lp: lower bounds must be finite");
    if (lp.upper[j] < lp.lower[j]) {
      Solution s;
      s.status = Status::infeasible;
      return s;
    }
  }

  // Columns: structural, one slack per inequality row, one artificial per row.
  std::vector<int> slack_of(m, -1);
  int cols = n;
  for (int i = 0; i < m; ++i) {
    if (lp.rows[i].sense != RowSense::eq) slack_of[i] = cols++;
  }
  const int art0 = cols;
  cols += m;

  Tableau tab(m, cols);
  for (int j = 0; j < n; ++j) tab.width_[j] = lp.upper[j] - lp.lower[j];
  for (int i = 0; i < m; ++i) {
    const Row& row = lp.rows[i];
    double rhs = row.rhs;
    for (int j = 0; j < n; ++j) {
      tab.t_[i][j] = row.coeffs[j];
      rhs -= row.coeffs[j] * lp.lower[j];
    }
    if (slack_of[i] >= 0) tab.t_[i][slack_of[i]] = row.sense == RowSense::le ? 1.0 : -1.0;
    if (rhs < 0.0) {
      for (int k = 0; k < cols; ++k) tab.t_[i][k] = -tab.t_[i][k];
      rhs = -rhs;
    }
    tab.t_[i][art0 + i] = 1.0;
    tab.basis_[i] = art0 + i;
    tab.beta_[i] = rhs;
  }

  Solution sol;
  std::vector<double> phase1(cols, 0.0);
  for (int i = 0; i < m; ++i) phase1[art0 + i] = 1.0;
  Status st = tab.run(phase1, opt.tolerance, opt.max_iterations, sol.iterations);
  if (st == Status::iteration_limit) {
    sol.status = st;
    return sol;
  }
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) {
    if (tab.basis_[i] >= art0) infeas += tab.beta_[i];
  }
  double scale = 1.0;
  for (const Row& r : lp.rows) scale = std::max(scale, std::abs(r.rhs));
  if (infeas > opt.tolerance * scale) {
    sol.status = Status::infeasible;
    return sol;
  }

  // Pin artificials at zero and pivot out those left in the basis where possible.
  for (int i = 0; i < m; ++i) tab.width_[art0 + i] = 0.0;
  for (int i = 0; i < m; ++i) {
    if (tab.basis_[i] < art0) continue;
    for (int j = 0; j < art0; ++j) {
      if (!tab.is_basic(j) && std::abs(tab.t_[i][j]) > 1e-7) {
        const double shift = tab.beta_[i] / tab.t_[i][j];
        const double base = tab.at_upper_[j] ? tab.width_[j] : 0.0;
        for (int k = 0; k < m; ++k) tab.beta_[k] -= shift * tab.t_[k][j];
        tab.pivot(i, j);
        tab.beta_[i] = base + shift;
        tab.at_upper_[j] = false;
        break;
      }
    }
  }

  const double sign = sense == Objective::minimize ? 1.0 : -1.0;
  std::vector<double> phase2(cols, 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = sign * lp.cost[j];
  st = tab.run(phase2, opt.tolerance, opt.max_iterations, sol.iterations);
  sol.status = st;
  if (st != Status::optimal) return sol;

  std::vector<double> y(cols, 0.0);
  for (int j = 0; j < cols; ++j) {
    if (tab.at_upper_[j]) y[j] = tab.width_[j];
  }
  for (int i = 0; i < m; ++i) y[tab.basis_[i]] = tab.beta_[i];
  sol.x.resize(n);
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) {
    sol.x[j] = std::clamp(lp.lower[j] + y[j], lp.lower[j], lp.upper[j]);
    sol.objective += lp.cost[j] * sol.x[j];
  }
  for (int i = 0; i < m; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) lhs += lp.rows[i].coeffs[j] * sol.x[j];
    if (std::abs(lhs - lp.rows[i].rhs) <= opt.tolerance * std::max(1.0, std::abs(lp.rows[i].rhs))) {
      sol.binding_rows.push_back(i);
    }
  }
  return sol;
}

}  // namespace geoqkd::lp

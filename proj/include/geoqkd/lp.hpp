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

#include <limits>
#include <string>
#include <vector>

namespace geoqkd::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { le, ge, eq };
enum class Objective { minimize, maximize };
enum class Status { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(Status s);

/// One linear constraint, dense over all variables.
struct Row {
  std::vector<double> coeffs;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

/// Small dense LP with finite lower bounds and possibly infinite upper bounds.
struct LinearProgram {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  /// Appends a variable and returns its index.
  int add_variable(double lo, double hi, double c = 0.0);
  /// Appends a row; coefficients missing from the tail are zero.
  void add_row(std::vector<double> coeffs, RowSense sense, double rhs);
  int num_variables() const { return static_cast<int>(cost.size()); }
};

struct Solution {
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
  /// Indices of rows whose slack is zero at the optimum.
  std::vector<int> binding_rows;
};

struct SolverOptions {
  double tolerance = 1e-9;
  int max_iterations = 20000;
};

/// Bounded-variable primal simplex, two phases, Bland's rule throughout.
Solution solve(const LinearProgram& lp, Objective sense, const SolverOptions& opt = {});

}  // namespace geoqkd::lp

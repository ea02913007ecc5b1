// Copyright 2026 The csgbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

namespace csg::lp {

enum class Relation { less_equal, equal, greater_equal };

struct Constraint {
  std::vector<double> coeffs;  // one per variable
  Relation rel = Relation::less_equal;
  double rhs = 0.0;
};

// maximize objective·x subject to constraints, x >= 0.
struct Problem {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> constraints;
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

struct Options {
  // Smallest reduced cost that lets a column enter.
  double cost_tol = 1e-12;
  // Smallest direction entry accepted as a pivot.
  double pivot_tol = 1e-9;
  double feas_tol = 1e-9;
  // 0 selects 50 * (rows + columns).
  std::size_t max_pivots = 0;
};

// Two-phase revised simplex; the entering column follows Bland's rule. The
// basis is refactored from the original data on every pivot, so round-off
// does not accumulate. Throws SolverError when the pivot cap is hit or the
// basis turns singular.
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace csg::lp

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

#include "csg/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csg/error.hpp"

namespace csg::lp {

namespace {

// Dense LU with partial pivoting of a square column-major basis matrix.
class Lu {
 public:
  explicit Lu(std::size_t n) : n_(n), a_(n * n), perm_(n) {}

  // Factors the matrix whose column k is cols[k]. Returns false if singular.
  bool factor(const std::vector<const std::vector<double>*>& cols) {
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t i = 0; i < n_; ++i) at(i, k) = (*cols[k])[i];
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n_; ++i)
        if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
      if (std::abs(at(p, k)) < 1e-14) return false;
      if (p != k) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(at(p, j), at(k, j));
        std::swap(perm_[p], perm_[k]);
      }
      for (std::size_t i = k + 1; i < n_; ++i) {
        at(i, k) /= at(k, k);
        for (std::size_t j = k + 1; j < n_; ++j) at(i, j) -= at(i, k) * at(k, j);
      }
    }
    return true;
  }

  // B x = b
  std::vector<double> solve(const std::vector<double>& b) const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= at(i, j) * x[j];
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t j = i + 1; j < n_; ++j) x[i] -= at(i, j) * x[j];
      x[i] /= at(i, i);
    }
    return x;
  }

  // Bᵀ y = c
  std::vector<double> solve_transposed(const std::vector<double>& c) const {
    std::vector<double> z(c);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) z[i] -= at(j, i) * z[j];
      z[i] /= at(i, i);
    }
    for (std::size_t i = n_; i-- > 0;)
      for (std::size_t j = i + 1; j < n_; ++j) z[i] -= at(j, i) * z[j];
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[perm_[i]] = z[i];
    return y;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  std::size_t n_;
  std::vector<double> a_;
  std::vector<std::size_t> perm_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Standard form: equality rows, columns structural | slack/surplus | artificial, b >= 0.
struct StandardForm {
  std::size_t m = 0;
  std::size_t art_begin = 0;
  std::vector<std::vector<double>> cols;
  std::vector<double> b;
  std::vector<std::size_t> basis;
};

class Solver {
 public:
  Solver(StandardForm& f, const Options& opt, std::size_t cap) : f_(f), opt_(opt), cap_(cap), lu_(f.m) {}

  std::size_t pivots = 0;

  // Basic solution of the current basis.
  std::vector<double> basic_values() {
    refactor();
    auto x = lu_.solve(f_.b);
    for (double& v : x)
      if (v < 0.0 && v > -opt_.feas_tol) v = 0.0;
    return x;
  }

  // Maximizes cost·x with only non-artificial columns allowed to enter.
  // Returns false if unbounded.
  bool optimize(const std::vector<double>& cost) {
    const std::size_t m = f_.m;
    std::vector<char> basic(f_.cols.size(), 0);
    for (;;) {
      const auto x = basic_values();
      std::fill(basic.begin(), basic.end(), 0);
      std::vector<double> cb(m);
      for (std::size_t r = 0; r < m; ++r) {
        basic[f_.basis[r]] = 1;
        cb[r] = cost[f_.basis[r]];
      }
      const auto y = lu_.solve_transposed(cb);

      std::size_t enter = f_.art_begin;
      for (std::size_t j = 0; j < f_.art_begin; ++j) {
        if (basic[j]) continue;
        if (cost[j] - dot(y, f_.cols[j]) > opt_.cost_tol) {
          enter = j;
          break;
        }
      }
      if (enter == f_.art_begin) return true;

      const auto w = lu_.solve(f_.cols[enter]);
      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      // Among rows tied in the ratio test the largest pivot keeps the basis
      // well conditioned; the lower basis index breaks exact ties.
      for (std::size_t r = 0; r < m; ++r) {
        if (w[r] <= opt_.pivot_tol) continue;
        const double ratio = x[r] / w[r];
        if (leave == m || ratio < best - opt_.feas_tol) {
          leave = r;
          best = ratio;
        } else if (ratio <= best + opt_.feas_tol &&
                   (w[r] > w[leave] || (w[r] == w[leave] && f_.basis[r] < f_.basis[leave]))) {
          leave = r;
          best = std::min(best, ratio);
        }
      }
      if (leave == m) return false;
      if (++pivots > cap_) throw SolverError("simplex pivot cap exceeded");
      f_.basis[leave] = enter;
    }
  }

  // Replaces basic artificials at level zero by structural or slack columns
  // where the basis stays nonsingular. Rows where none fits are redundant.
  void drive_out_artificials() {
    std::vector<char> basic(f_.cols.size(), 0);
    for (std::size_t r = 0; r < f_.m; ++r) basic[f_.basis[r]] = 1;
    for (std::size_t r = 0; r < f_.m; ++r) {
      if (f_.basis[r] < f_.art_begin) continue;
      refactor();
      for (std::size_t j = 0; j < f_.art_begin; ++j) {
        if (basic[j]) continue;
        if (std::abs(lu_.solve(f_.cols[j])[r]) > opt_.pivot_tol) {
          basic[f_.basis[r]] = 0;
          basic[j] = 1;
          f_.basis[r] = j;
          break;
        }
      }
    }
  }

 private:
  void refactor() {
    std::vector<const std::vector<double>*> cols(f_.m);
    for (std::size_t r = 0; r < f_.m; ++r) cols[r] = &f_.cols[f_.basis[r]];
    if (!lu_.factor(cols)) throw SolverError("simplex basis became singular");
  }

  StandardForm& f_;
  const Options& opt_;
  std::size_t cap_;
  Lu lu_;
};

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  const std::size_t nv = problem.num_vars;
  const std::size_t m = problem.constraints.size();
  if (problem.objective.size() != nv) throw UsageError("objective size mismatch");

  std::size_t n_slack = 0, n_art = 0;
  std::vector<Relation> rels;
  for (const auto& c : problem.constraints) {
    if (c.coeffs.size() != nv) throw UsageError("constraint size mismatch");
    Relation rel = c.rel;
    if (c.rhs < 0.0 && rel != Relation::equal)
      rel = rel == Relation::less_equal ? Relation::greater_equal : Relation::less_equal;
    if (rel != Relation::equal) ++n_slack;
    if (rel != Relation::less_equal) ++n_art;
    rels.push_back(rel);
  }

  StandardForm f;
  f.m = m;
  f.art_begin = nv + n_slack;
  const std::size_t ncols = f.art_begin + n_art;
  f.cols.assign(ncols, std::vector<double>(m, 0.0));
  f.b.resize(m);
  f.basis.resize(m);
  std::size_t slack = nv, art = f.art_begin;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& c = problem.constraints[r];
    const double sign = c.rhs < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nv; ++j) f.cols[j][r] = sign * c.coeffs[j];
    f.b[r] = sign * c.rhs;
    if (rels[r] == Relation::less_equal) {
      f.cols[slack][r] = 1.0;
      f.basis[r] = slack++;
    } else {
      if (rels[r] == Relation::greater_equal) f.cols[slack++][r] = -1.0;
      f.cols[art][r] = 1.0;
      f.basis[r] = art++;
    }
  }

  const std::size_t cap = options.max_pivots ? options.max_pivots : 50 * (m + ncols + 1);
  Solver solver(f, options, cap);
  Solution sol;

  if (n_art > 0) {
    std::vector<double> phase1(ncols, 0.0);
    for (std::size_t j = f.art_begin; j < ncols; ++j) phase1[j] = -1.0;
    solver.optimize(phase1);
    const auto x = solver.basic_values();
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < m; ++r)
      if (f.basis[r] >= f.art_begin) infeasibility += x[r];
    if (infeasibility > options.feas_tol * static_cast<double>(m + 1)) {
      sol.pivots = solver.pivots;
      return sol;
    }
    solver.drive_out_artificials();
  }

  std::vector<double> phase2(ncols, 0.0);
  std::copy(problem.objective.begin(), problem.objective.end(), phase2.begin());
  const bool bounded = solver.optimize(phase2);
  sol.pivots = solver.pivots;
  if (!bounded) {
    sol.status = Status::unbounded;
    return sol;
  }
  const auto x = solver.basic_values();
  sol.status = Status::optimal;
  sol.x.assign(nv, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (f.basis[r] < nv) sol.x[f.basis[r]] = std::max(0.0, x[r]);
  sol.objective = dot(problem.objective, sol.x);
  return sol;
}

}  // namespace csg::lp

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

#include "csg/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csg/error.hpp"
#include "csg/simplex.hpp"

namespace csg {

namespace {

std::string describe(const PayoffMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.num_rows; ++i) {
    out += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.num_cols; ++j) {
      if (j) out += ",";
      out += std::to_string(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

void check_shape(const PayoffMatrix& m) {
  if (m.num_rows == 0 || m.num_cols == 0 || m.entries.size() != m.num_rows * m.num_cols)
    throw UsageError("payoff matrix needs at least one row and one column");
  for (double e : m.entries)
    if (!std::isfinite(e)) throw UsageError("payoff matrix has a non-finite entry");
}

// Pure saddle point, if one exists.
bool try_saddle(const PayoffMatrix& m, MatrixGameSolution& out, bool want_col) {
  double maximin = -std::numeric_limits<double>::infinity();
  std::size_t best_row = 0;
  for (std::size_t i = 0; i < m.num_rows; ++i) {
    double lo = m(i, 0);
    for (std::size_t j = 1; j < m.num_cols; ++j) lo = std::min(lo, m(i, j));
    if (lo > maximin) {
      maximin = lo;
      best_row = i;
    }
  }
  double minimax = std::numeric_limits<double>::infinity();
  std::size_t best_col = 0;
  for (std::size_t j = 0; j < m.num_cols; ++j) {
    double hi = m(0, j);
    for (std::size_t i = 1; i < m.num_rows; ++i) hi = std::max(hi, m(i, j));
    if (hi < minimax) {
      minimax = hi;
      best_col = j;
    }
  }
  if (maximin != minimax) return false;
  out.value = maximin;
  out.row_strategy.assign(m.num_rows, 0.0);
  out.row_strategy[best_row] = 1.0;
  if (want_col) {
    out.col_strategy.assign(m.num_cols, 0.0);
    out.col_strategy[best_col] = 1.0;
  }
  return true;
}

// Affine map of the entries onto [0, 1]; the LPs are solved in these units.
struct Scale {
  double lo = 0.0;
  double range = 1.0;
  bool flat = false;

  explicit Scale(const PayoffMatrix& m) {
    const auto [a, b] = std::minmax_element(m.entries.begin(), m.entries.end());
    lo = *a;
    flat = *b == *a;
    if (!flat) range = *b - *a;
  }
  double to(double v) const { return (v - lo) / range; }
  double from(double z) const { return lo + z * range; }
};

// maximize z s.t. Σ_i x_i M_ij >= z for all j, Σ x = 1, x >= 0.
std::pair<double, std::vector<double>> solve_row_lp(const PayoffMatrix& m) {
  const Scale sc(m);
  lp::Problem p;
  p.num_vars = m.num_rows + 1;
  p.objective.assign(p.num_vars, 0.0);
  p.objective.back() = 1.0;
  for (std::size_t j = 0; j < m.num_cols; ++j) {
    lp::Constraint c{std::vector<double>(p.num_vars, 0.0), lp::Relation::greater_equal, 0.0};
    for (std::size_t i = 0; i < m.num_rows; ++i) c.coeffs[i] = sc.to(m(i, j));
    c.coeffs.back() = -1.0;
    p.constraints.push_back(std::move(c));
  }
  lp::Constraint sum{std::vector<double>(p.num_vars, 1.0), lp::Relation::equal, 1.0};
  sum.coeffs.back() = 0.0;
  p.constraints.push_back(std::move(sum));
  const auto sol = lp::solve(p);
  if (sol.status != lp::Status::optimal)
    throw SolverError("matrix game LP did not reach an optimum for " + describe(m));
  std::vector<double> x(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m.num_rows));
  return {sc.from(sol.x.back()), clean_distribution(std::move(x))};
}

PayoffMatrix negated_transpose(const PayoffMatrix& m) {
  PayoffMatrix t(m.num_cols, m.num_rows);
  for (std::size_t i = 0; i < m.num_rows; ++i)
    for (std::size_t j = 0; j < m.num_cols; ++j) t(j, i) = -m(i, j);
  return t;
}

MatrixGameSolution solve_impl(const PayoffMatrix& m, bool want_col) {
  check_shape(m);
  MatrixGameSolution out;
  if (try_saddle(m, out, want_col)) return out;
  auto [value, x] = solve_row_lp(m);
  out.value = value;
  out.row_strategy = std::move(x);
  if (want_col) {
    auto [neg, y] = solve_row_lp(negated_transpose(m));
    if (std::abs(-neg - value) > 10 * kLpTol)
      throw SolverError("primal and dual matrix game values disagree for " + describe(m));
    out.col_strategy = std::move(y);
  }
  return out;
}

}  // namespace

PayoffMatrix PayoffMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  PayoffMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.num_cols) throw UsageError("ragged payoff matrix");
    for (std::size_t j = 0; j < m.num_cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

PayoffMatrix PayoffMatrix::transposed_complement() const {
  PayoffMatrix t(num_cols, num_rows);
  t.rows = cols;
  t.cols = rows;
  for (std::size_t i = 0; i < num_rows; ++i)
    for (std::size_t j = 0; j < num_cols; ++j) t(j, i) = 1.0 - (*this)(i, j);
  return t;
}

PayoffMatrix PayoffMatrix::select_rows(const std::vector<std::size_t>& keep) const {
  PayoffMatrix r(keep.size(), num_cols);
  r.cols = cols;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (!rows.empty()) r.rows.push_back(rows[keep[k]]);
    for (std::size_t j = 0; j < num_cols; ++j) r(k, j) = (*this)(keep[k], j);
  }
  return r;
}

MatrixGameSolution solve_matrix(const PayoffMatrix& m) { return solve_impl(m, true); }

MatrixGameSolution solve_matrix_row(const PayoffMatrix& m) { return solve_impl(m, false); }

double row_guarantee(const PayoffMatrix& m, const std::vector<double>& x) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m.num_cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.num_rows; ++i) s += x[i] * m(i, j);
    worst = std::min(worst, s);
  }
  return worst;
}

double col_guarantee(const PayoffMatrix& m, const std::vector<double>& y) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.num_rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.num_cols; ++j) s += y[j] * m(i, j);
    worst = std::max(worst, s);
  }
  return worst;
}

const char* to_string(MoveClass c) {
  switch (c) {
    case MoveClass::staying: return "staying";
    case MoveClass::leaving: return "leaving";
    case MoveClass::ambiguous: return "ambiguous";
  }
  return "?";
}

namespace {

bool inside(const Distribution& d, const std::vector<char>& mask) {
  return std::all_of(d.entries.begin(), d.entries.end(), [&](const auto& e) { return mask[e.first] != 0; });
}

}  // namespace

MoveClassification classify_moves(const Game& g, StateId s, const StateSet& c, Player player) {
  if (!contains(c, s)) throw UsageError("classify_moves: state '" + g.state_name(s) + "' not in set");
  const auto mask = to_mask(c, g.num_states());
  const auto own = g.num_moves(player, s);
  const auto other = g.num_moves(opponent(player), s);
  MoveClassification out{player, {}};
  out.tags.reserve(own);
  for (MoveId m = 0; m < own; ++m) {
    std::size_t stays = 0;
    for (MoveId o = 0; o < other; ++o) {
      const auto& d = player == Player::reach ? g.delta(s, m, o) : g.delta(s, o, m);
      if (inside(d, mask)) ++stays;
    }
    out.tags.push_back(stays == other ? MoveClass::staying
                       : stays == 0   ? MoveClass::leaving
                                      : MoveClass::ambiguous);
  }
  return out;
}

std::optional<MatrixGameSolution> solve_exit_matrix(const PayoffMatrix& m,
                                                    const std::vector<char>& staying,
                                                    const std::vector<char>& leaves) {
  check_shape(m);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m.num_rows; ++i)
    if (!staying[i]) keep.push_back(i);
  if (keep.empty()) return std::nullopt;
  for (std::size_t j = 0; j < m.num_cols; ++j) {
    const bool some = std::any_of(keep.begin(), keep.end(),
                                  [&](std::size_t i) { return leaves[i * m.num_cols + j] != 0; });
    if (!some) return std::nullopt;
  }

  const PayoffMatrix restricted = m.select_rows(keep);
  const MatrixGameSolution base = solve_matrix(restricted);

  // Among (v* - lpTol)-optimal row strategies, maximize the worst-case exit mass t.
  const std::size_t k = keep.size();
  lp::Problem p;
  p.num_vars = k + 1;
  p.objective.assign(k + 1, 0.0);
  p.objective.back() = 1.0;
  const Scale sc(restricted);
  for (std::size_t j = 0; j < m.num_cols; ++j) {
    lp::Constraint opt{std::vector<double>(k + 1, 0.0), lp::Relation::greater_equal,
                       sc.to(base.value - kLpTol)};
    lp::Constraint exit{std::vector<double>(k + 1, 0.0), lp::Relation::greater_equal, 0.0};
    for (std::size_t r = 0; r < k; ++r) {
      opt.coeffs[r] = sc.to(restricted(r, j));
      if (leaves[keep[r] * m.num_cols + j]) exit.coeffs[r] = 1.0;
    }
    exit.coeffs.back() = -1.0;
    // A constant matrix makes every strategy optimal.
    if (!sc.flat) p.constraints.push_back(std::move(opt));
    p.constraints.push_back(std::move(exit));
  }
  lp::Constraint sum{std::vector<double>(k + 1, 1.0), lp::Relation::equal, 1.0};
  sum.coeffs.back() = 0.0;
  p.constraints.push_back(std::move(sum));
  const auto sol = lp::solve(p);
  if (sol.status != lp::Status::optimal)
    throw SolverError("exit LP did not reach an optimum for " + describe(restricted));

  MatrixGameSolution out;
  out.value = base.value;
  std::vector<double> x(k);
  for (std::size_t r = 0; r < k; ++r) x[r] = sol.x[r];
  x = clean_distribution(std::move(x));
  out.row_strategy.assign(m.num_rows, 0.0);
  for (std::size_t r = 0; r < k; ++r) out.row_strategy[keep[r]] = x[r];
  out.col_strategy = base.col_strategy;
  out.exit_certificate = std::max(0.0, sol.x.back());
  return out;
}

std::optional<MatrixGameSolution> solve_exit(const Game& g, const Valuation& v, StateId s,
                                             const StateSet& c) {
  if (!contains(c, s)) throw UsageError("solve_exit: state '" + g.state_name(s) + "' not in set");
  for (StateId t : c)
    if (g.is_target(t)) throw UsageError("solve_exit: set intersects the target");
  const auto mask = to_mask(c, g.num_states());
  const auto rows = g.num_moves(Player::reach, s);
  const auto cols = g.num_moves(Player::safe, s);
  PayoffMatrix m(rows, cols);
  m.rows = g.move_names(Player::reach, s);
  m.cols = g.move_names(Player::safe, s);
  std::vector<char> leaves(rows * cols, 0), staying(rows, 0);
  for (MoveId a = 0; a < rows; ++a) {
    std::size_t stays = 0;
    for (MoveId b = 0; b < cols; ++b) {
      const auto& d = g.delta(s, a, b);
      double e = 0.0;
      for (const auto& [t, p] : d.entries) e += p * v[t];
      m(a, b) = e;
      if (inside(d, mask)) ++stays;
      else leaves[a * cols + b] = 1;
    }
    staying[a] = stays == cols;
  }
  return solve_exit_matrix(m, staying, leaves);
}

}  // namespace csg

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

#include "csg/pre.hpp"

#include "csg/error.hpp"

namespace csg {

double expected(const Game& g, const Valuation& v, StateId s, MoveId a, MoveId b) {
  double e = 0.0;
  for (const auto& [t, p] : g.delta(s, a, b).entries) e += p * v[t];
  return e;
}

double pre_pair(const Game& g, const Valuation& v, StateId s, const MixedStrategy& reach,
                const MixedStrategy& safe) {
  if (reach.owner != Player::reach || safe.owner != Player::safe)
    throw UsageError("pre_pair expects (reach, safe) strategies");
  double total = 0.0;
  const auto& x = reach.dist[s];
  const auto& y = safe.dist[s];
  for (MoveId a = 0; a < x.size(); ++a) {
    if (x[a] == 0.0) continue;
    for (MoveId b = 0; b < y.size(); ++b) {
      if (y[b] == 0.0) continue;
      total += x[a] * y[b] * expected(g, v, s, a, b);
    }
  }
  return total;
}

PayoffMatrix payoff_matrix(const Game& g, const Valuation& v, StateId s) {
  const auto rows = g.num_moves(Player::reach, s);
  const auto cols = g.num_moves(Player::safe, s);
  PayoffMatrix m(rows, cols);
  m.rows = g.move_names(Player::reach, s);
  m.cols = g.move_names(Player::safe, s);
  for (MoveId a = 0; a < rows; ++a)
    for (MoveId b = 0; b < cols; ++b) m(a, b) = expected(g, v, s, a, b);
  return m;
}

namespace {

// Matrix with the maximizer on the rows.
PayoffMatrix oriented(const Game& g, const Valuation& v, StateId s, Player maximizer) {
  const auto rows = g.num_moves(Player::reach, s);
  const auto cols = g.num_moves(Player::safe, s);
  if (maximizer == Player::reach) {
    PayoffMatrix m(rows, cols);
    for (MoveId a = 0; a < rows; ++a)
      for (MoveId b = 0; b < cols; ++b) m(a, b) = expected(g, v, s, a, b);
    return m;
  }
  PayoffMatrix m(cols, rows);
  for (MoveId a = 0; a < rows; ++a)
    for (MoveId b = 0; b < cols; ++b) m(b, a) = expected(g, v, s, a, b);
  return m;
}

}  // namespace

PreResult pre_opt(const Game& g, const Valuation& v, StateId s, Player maximizer) {
  auto sol = solve_matrix(oriented(g, v, s, maximizer));
  return {sol.value, std::move(sol.row_strategy), std::move(sol.col_strategy)};
}

PreResult pre_opt_value(const Game& g, const Valuation& v, StateId s, Player maximizer) {
  auto sol = solve_matrix_row(oriented(g, v, s, maximizer));
  return {sol.value, std::move(sol.row_strategy), {}};
}

}  // namespace csg

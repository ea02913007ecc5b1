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

#include <optional>
#include <string>
#include <vector>

#include "csg/game.hpp"

namespace csg {

// Tolerance for all value comparisons derived from LP solutions.
inline constexpr double kLpTol = 1e-9;
// Minimal worst-case exit mass for an exit strategy to count as leaving.
inline constexpr double kExitFloor = 1e-9;

// Zero-sum one-shot game; the row player maximizes.
struct PayoffMatrix {
  std::vector<std::string> rows;  // optional labels
  std::vector<std::string> cols;
  std::size_t num_rows = 0;
  std::size_t num_cols = 0;
  std::vector<double> entries;  // row-major

  PayoffMatrix() = default;
  PayoffMatrix(std::size_t r, std::size_t c) : num_rows(r), num_cols(c), entries(r * c, 0.0) {}
  static PayoffMatrix from_rows(const std::vector<std::vector<double>>& rows);

  double& operator()(std::size_t i, std::size_t j) { return entries[i * num_cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries[i * num_cols + j]; }

  // (1 - M) transposed: the same game seen from the column player.
  PayoffMatrix transposed_complement() const;
  PayoffMatrix select_rows(const std::vector<std::size_t>& keep) const;
};

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
  std::optional<double> exit_certificate;
};

// Value and optimal mixed strategies for both players. Throws SolverError on
// LP breakdown.
MatrixGameSolution solve_matrix(const PayoffMatrix& m);

// Same, but skips the column player's LP (col_strategy left empty).
MatrixGameSolution solve_matrix_row(const PayoffMatrix& m);

// Guaranteed payoffs of fixed mixed strategies.
double row_guarantee(const PayoffMatrix& m, const std::vector<double>& x);
double col_guarantee(const PayoffMatrix& m, const std::vector<double>& y);

enum class MoveClass { staying, leaving, ambiguous };
const char* to_string(MoveClass c);

struct MoveClassification {
  Player player = Player::reach;
  std::vector<MoveClass> tags;  // indexed by the player's MoveId at s
};

// Staying/leaving tags of player's moves at s relative to C (requires s in C).
MoveClassification classify_moves(const Game& g, StateId s, const StateSet& c,
                                  Player player = Player::reach);

// Exit-constrained matrix game. staying[i] marks rows to drop; leaves[i*cols+j]
// marks (row, col) pairs that leave the component. Returns nullopt when no
// strategy over the remaining rows leaves against every column.
std::optional<MatrixGameSolution> solve_exit_matrix(const PayoffMatrix& m,
                                                    const std::vector<char>& staying,
                                                    const std::vector<char>& leaves);

// Pre^exit at s for reach w.r.t. component C: value v* of the game without
// staying rows, a row strategy maximizing the worst-case exit mass among
// v*-optimal ones (exit_certificate), and the column best response.
std::optional<MatrixGameSolution> solve_exit(const Game& g, const Valuation& v, StateId s,
                                             const StateSet& c);

}  // namespace csg

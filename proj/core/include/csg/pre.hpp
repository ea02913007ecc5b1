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

#include <vector>

#include "csg/game.hpp"
#include "csg/matrix_game.hpp"

namespace csg {

// Σ_{s'} v(s') δ(s,a,b)(s').
double expected(const Game& g, const Valuation& v, StateId s, MoveId a, MoveId b);

// One-step expectation of v at s under the two strategies.
double pre_pair(const Game& g, const Valuation& v, StateId s, const MixedStrategy& reach,
                const MixedStrategy& safe);

// Rows are reach moves, columns safe moves, entries expected v.
PayoffMatrix payoff_matrix(const Game& g, const Valuation& v, StateId s);

struct PreResult {
  double value = 0.0;
  std::vector<double> max_strategy;  // over the maximizer's moves at s
  std::vector<double> min_strategy;  // over the minimizer's moves at s
};

// Optimal one-step value of v at s when `maximizer` maximizes the expectation
// of v and the other player minimizes it.
PreResult pre_opt(const Game& g, const Valuation& v, StateId s, Player maximizer);

// Value only, with the maximizer's strategy (skips the second LP).
PreResult pre_opt_value(const Game& g, const Valuation& v, StateId s, Player maximizer);

}  // namespace csg

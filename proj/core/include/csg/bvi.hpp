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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csg/game.hpp"
#include "csg/graph.hpp"
#include "csg/matrix_game.hpp"

namespace csg {

enum class Termination { gap, lower_fix, upper_fix, iter_cap };
const char* to_string(Termination t);

struct IterationSnapshot {
  std::size_t iteration = 0;
  Valuation lower;
  Valuation upper_before_deflate;
  Valuation upper;
};

// Certified per-state interval plus the strategies that came with it.
// All valuations and strategies are indexed by the caller's game.
struct BoundsResult {
  Valuation lower;
  Valuation upper;
  std::size_t iterations = 0;
  Termination termination = Termination::iter_cap;
  std::vector<IterationSnapshot> trace;
  MixedStrategy reach_strategy;
  MixedStrategy safe_strategy;
  StateSet winning;
  MecDecomposition mecs;  // components outside target and winning region
  std::vector<std::string> diagnostics;
};

struct BviConfig {
  double epsilon = 1e-6;
  std::size_t max_iters = 1'000'000;
  double lp_tol = kLpTol;
  double best_exit_tol = 1e-9;
  bool naive_upper = false;  // skip DEFLATE (the upper bound may then stall)
  bool stop_at_fixpoint = true;  // off: only the gap and the cap end the run
  bool trace = false;
  bool collapse_sinks = true;
  unsigned threads = 1;

  // Throws UsageError when the invariants on the fields do not hold.
  void validate() const;
};

// Working copy of a game with target and sure-winning states made absorbing,
// optionally merged into one target sink and one losing sink.
struct PreparedGame {
  Game game;
  StateSet target;
  StateSet winning;
  std::vector<EndComponent> mecs;  // outside target ∪ winning
  std::vector<char> fixed;  // mask of target ∪ winning
  std::vector<StateId> to_working;
  std::size_t original_states = 0;
  StateSet winning_original;

  // Maps back to the original game. Safe strategies get the sure-winning
  // move at winning states, which the absorbing rewrite assumed.

  Valuation expand(const Valuation& v) const;
  MixedStrategy expand(const MixedStrategy& s, const Game& original) const;
  StateSet expand_set(const StateSet& s) const;
};

PreparedGame prepare(const Game& g, bool collapse_sinks = true);

Valuation initial_lower(const PreparedGame& p);
Valuation initial_upper(const PreparedGame& p);

// One Jacobi sweep of the optimal Pre operator, keeping target/winning fixed.
Valuation lower_step(const PreparedGame& p, const Valuation& l, unsigned threads = 1);
Valuation upper_step(const PreparedGame& p, const Valuation& u, unsigned threads = 1);

struct BestExit {
  double value = 0.0;
  StateSet witnesses;
  // Exit game solution per state of the set (nullopt where no exit exists).
  std::vector<std::optional<MatrixGameSolution>> exits;
};

// max over s in c of the exit value; throws InternalError when no state of c
// has an exit (c would have to be inside the winning region).
BestExit best_exit(const Game& g, const Valuation& v, const StateSet& c, double tol = 1e-9);

// Information handed to a DEFLATE observer after each round.
struct DeflateRound {
  const StateSet& remaining;  // set before removing the attractor
  const BestExit& exit;
  const StateSet& attracted;  // B
  const Valuation& updated;   // valuation after the min-update
};

// Lowers v inside c to the best exit value, layer by layer.
Valuation deflate(const Game& g, Valuation v, const StateSet& c, double tol = 1e-9,
                  const std::function<void(const DeflateRound&)>& on_round = {});

BoundsResult run_bvi(const Game& g, const BviConfig& cfg = {});

// Max-norm distance between valuations.
double max_diff(const Valuation& a, const Valuation& b);

}  // namespace csg

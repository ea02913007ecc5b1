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
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "csg/game.hpp"

namespace csg {

// Markov chain of a game under a fixed strategy pair. Target and sure-winning
// states are absorbing.
struct InducedChain {
  std::vector<std::vector<std::pair<StateId, double>>> rows;  // sorted by successor
  StateSet target;

  std::size_t num_states() const { return rows.size(); }
  double operator()(StateId s, StateId t) const;
};

InducedChain induced_chain(const Game& g, const MixedStrategy& reach, const MixedStrategy& safe);

// Exact reachability probabilities of chain.target.
Valuation chain_reach(const InducedChain& chain);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double half_width = 0.0;  // 95% normal approximation
  std::size_t samples = 0;
  std::size_t hits = 0;
  std::size_t truncated = 0;  // runs cut at the horizon, counted as misses
};

inline constexpr std::size_t kDefaultHorizon = 100'000;

MonteCarloEstimate monte_carlo(const InducedChain& chain, StateId start, std::size_t samples,
                               std::size_t horizon_cap = kDefaultHorizon, std::uint64_t seed = 0,
                               unsigned threads = 1);

struct RandomGameSpec {
  std::size_t state_count = 10;
  std::size_t max_moves_per_player = 2;
  std::size_t branching = 2;
  double target_fraction = 0.1;
  double ec_bias = 0.2;
  std::uint64_t seed = 0;
  std::optional<Player> trivial_player;  // this player gets one move everywhere

  void validate() const;
};

GameDef gen_random_game(const RandomGameSpec& spec);

// Optimal reachability when one player has a single move at every state
// (policy iteration). Throws UsageError if both players have a choice somewhere.
Valuation mdp_optimal_reach(const Game& g);

// High-precision bounds from BVI, used as ground truth in tests. Fixpoints do
// not end the run, and the bounds are tightened by the exact values of the
// extracted strategies. The interval can stay wide if BVI stalls.
struct ReferenceBounds {
  Valuation lower;
  Valuation upper;
  bool converged = false;  // every state within epsilon
};
ReferenceBounds reference_bounds(const Game& g, double epsilon = 1e-8, std::size_t max_iters = 100'000);

// Midpoint of reference_bounds.
Valuation reference_value(const Game& g, double epsilon = 1e-8);

}  // namespace csg

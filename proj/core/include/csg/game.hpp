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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace csg {

using StateId = std::uint32_t;
using MoveId = std::uint32_t;

// Reach maximizes the probability of visiting the target; safe minimizes it.
enum class Player { reach, safe };

inline Player opponent(Player p) { return p == Player::reach ? Player::safe : Player::reach; }
const char* to_string(Player p);

// Tolerance on distribution sums accepted at load time.
inline constexpr double kProbTol = 1e-9;

// Sorted, duplicate-free list of states.
using StateSet = std::vector<StateId>;

// Per-state estimate in [0,1], indexed by StateId.
using Valuation = std::vector<double>;

// Sparse distribution over states, sorted by state, strictly positive entries.
struct Distribution {
  std::vector<std::pair<StateId, double>> entries;

  double operator()(StateId s) const;
  StateSet support() const;
  bool operator==(const Distribution&) const = default;
};

// Name-based game description as it comes from a file or a generator.
struct TransitionDef {
  std::string from;
  std::string m1;
  std::string m2;
  std::vector<std::pair<std::string, double>> to;

  bool operator==(const TransitionDef&) const = default;
};

struct GameDef {
  std::vector<std::string> states;
  std::map<std::string, std::vector<std::string>> moves1;
  std::map<std::string, std::vector<std::string>> moves2;
  std::vector<TransitionDef> transitions;
  std::vector<std::string> target;
  std::optional<std::string> init;

  bool operator==(const GameDef&) const = default;
};

// One entry per invariant violation; empty means the definition is valid.
std::vector<std::string> validate_game(const GameDef& def);

// Immutable, index-based concurrent game. States and moves are interned to
// dense indices; transitions are stored per (state, move1, move2) triple.
class Game {
 public:
  // Throws ValidationError carrying validate_game's diagnostics.
  static Game build(const GameDef& def);

  std::size_t num_states() const { return names_.size(); }
  const std::string& state_name(StateId s) const { return names_[s]; }
  std::optional<StateId> find_state(const std::string& name) const;

  std::size_t num_moves(Player p, StateId s) const { return moves_[index(p)][s].size(); }
  const std::vector<std::string>& move_names(Player p, StateId s) const {
    return moves_[index(p)][s];
  }
  std::optional<MoveId> find_move(Player p, StateId s, const std::string& name) const;

  // delta(s, a, b); a indexes Γ1(s), b indexes Γ2(s).
  const Distribution& delta(StateId s, MoveId a, MoveId b) const {
    return transitions_[offsets_[s] + a * moves_[1][s].size() + b];
  }

  bool is_target(StateId s) const { return target_[s] != 0; }
  StateSet target() const;
  std::optional<StateId> init() const { return init_; }

  // Inverse of build: emits names, moves, and every transition in index order.
  GameDef to_def() const;

  bool operator==(const Game&) const = default;

  // Low-level constructor used by transformations that already hold interned data.
  Game(std::vector<std::string> names, std::vector<std::vector<std::string>> moves1,
       std::vector<std::vector<std::string>> moves2, std::vector<Distribution> transitions,
       std::vector<char> target, std::optional<StateId> init);

 private:
  static std::size_t index(Player p) { return p == Player::reach ? 0 : 1; }

  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> moves_[2];
  std::vector<std::size_t> offsets_;
  std::vector<Distribution> transitions_;
  std::vector<char> target_;
  std::optional<StateId> init_;
};

// Per-state distribution over the owner's available moves (dense by MoveId).
struct MixedStrategy {
  Player owner = Player::reach;
  std::vector<std::vector<double>> dist;

  static MixedStrategy uniform(const Game& g, Player owner);
  static MixedStrategy dirac(const Game& g, Player owner, const std::vector<MoveId>& choice);

  bool is_pure() const;
  std::vector<MoveId> support(StateId s) const;
  bool operator==(const MixedStrategy&) const = default;
};

// Clips entries below kStrategyClip to zero and renormalizes.
inline constexpr double kStrategyClip = 1e-12;
std::vector<double> clean_distribution(std::vector<double> p);

// Throws UsageError unless the strategy fits the game and its owner's moves.
void check_strategy(const Game& g, const MixedStrategy& strat);

// Potential successors Supp(delta(s,a,b)). Throws UsageError for unavailable moves.
StateSet dest(const Game& g, StateId s, MoveId a, MoveId b);

// Union of dest over the supports of both strategies at s.
StateSet dest_strat(const Game& g, StateId s, const MixedStrategy& reach,
                    const MixedStrategy& safe);

// Set helpers over sorted StateSets.
bool contains(const StateSet& set, StateId s);
bool is_subset(const StateSet& a, const StateSet& b);
StateSet set_union(const StateSet& a, const StateSet& b);
StateSet set_difference(const StateSet& a, const StateSet& b);

// Membership mask of size n.
std::vector<char> to_mask(const StateSet& set, std::size_t n);

}  // namespace csg

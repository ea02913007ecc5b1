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

#include "csg/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "csg/error.hpp"

namespace csg {

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += "; ";
    out += l;
  }
  return out;
}

// Divides by the sum, then pushes the rounding residual onto the largest
// entry so the entries add up to exactly 1 in storage order.
void normalize(Distribution& d) {
  double sum = 0.0;
  for (const auto& [s, p] : d.entries) sum += p;
  if (sum == 1.0) return;
  for (auto& [s, p] : d.entries) p /= sum;
  double again = 0.0;
  for (const auto& [s, p] : d.entries) again += p;
  if (again != 1.0) {
    auto big = std::max_element(d.entries.begin(), d.entries.end(),
                                [](const auto& x, const auto& y) { return x.second < y.second; });
    big->second += 1.0 - again;
  }
}

}  // namespace

const char* to_string(Player p) { return p == Player::reach ? "reach" : "safe"; }

ValidationError::ValidationError(std::vector<std::string> diagnostics)
    : Error("invalid game: " + join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

double Distribution::operator()(StateId s) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), s,
                             [](const auto& e, StateId x) { return e.first < x; });
  return (it != entries.end() && it->first == s) ? it->second : 0.0;
}

StateSet Distribution::support() const {
  StateSet out;
  out.reserve(entries.size());
  for (const auto& [s, p] : entries) out.push_back(s);
  return out;
}

std::vector<std::string> validate_game(const GameDef& def) {
  std::vector<std::string> diags;
  std::unordered_map<std::string, std::size_t> ids;
  for (const auto& s : def.states) {
    if (!ids.emplace(s, ids.size()).second) diags.push_back("duplicate state '" + s + "'");
  }
  if (def.states.empty()) diags.push_back("game has no states");

  auto check_moves = [&](const std::map<std::string, std::vector<std::string>>& moves,
                         const char* which) {
    for (const auto& [s, list] : moves) {
      if (!ids.contains(s)) diags.push_back(std::string("unknown state '") + s + "' in " + which);
      std::set<std::string> seen;
      for (const auto& m : list) {
        if (!seen.insert(m).second)
          diags.push_back(std::string("duplicate move '") + m + "' at state '" + s + "' in " + which);
      }
    }
    for (const auto& s : def.states) {
      auto it = moves.find(s);
      if (it == moves.end() || it->second.empty())
        diags.push_back(std::string("empty move set for state '") + s + "' in " + which);
    }
  };
  check_moves(def.moves1, "moves1");
  check_moves(def.moves2, "moves2");

  auto has_move = [](const std::map<std::string, std::vector<std::string>>& moves,
                     const std::string& s, const std::string& m) {
    auto it = moves.find(s);
    return it != moves.end() && std::find(it->second.begin(), it->second.end(), m) != it->second.end();
  };

  std::set<std::tuple<std::string, std::string, std::string>> defined;
  for (const auto& t : def.transitions) {
    const std::string where = "(" + t.from + ", " + t.m1 + ", " + t.m2 + ")";
    if (!ids.contains(t.from)) {
      diags.push_back("unknown state '" + t.from + "' in transition " + where);
      continue;
    }
    if (!has_move(def.moves1, t.from, t.m1) || !has_move(def.moves2, t.from, t.m2)) {
      diags.push_back("transition for unavailable move pair " + where);
      continue;
    }
    if (!defined.emplace(t.from, t.m1, t.m2).second) {
      diags.push_back("duplicate transition " + where);
      continue;
    }
    double sum = 0.0;
    bool bad_prob = false;
    std::set<std::string> targets;
    for (const auto& [to, p] : t.to) {
      if (!ids.contains(to)) diags.push_back("unknown state '" + to + "' in transition " + where);
      if (!targets.insert(to).second) diags.push_back("duplicate successor '" + to + "' in " + where);
      if (!(p >= 0.0 && p <= 1.0)) bad_prob = true;
      sum += p;
    }
    if (bad_prob) diags.push_back("probability outside [0,1] in transition " + where);
    if (t.to.empty() || std::abs(sum - 1.0) > kProbTol) {
      std::ostringstream os;
      os << "distribution sum " << sum << " != 1 in transition " << where;
      diags.push_back(os.str());
    }
  }
  for (const auto& s : def.states) {
    auto m1 = def.moves1.find(s);
    auto m2 = def.moves2.find(s);
    if (m1 == def.moves1.end() || m2 == def.moves2.end()) continue;
    for (const auto& a : m1->second)
      for (const auto& b : m2->second)
        if (!defined.contains({s, a, b}))
          diags.push_back("missing transition (" + s + ", " + a + ", " + b + ")");
  }

  for (const auto& s : def.target)
    if (!ids.contains(s)) diags.push_back("unknown state '" + s + "' in target");
  if (def.init && !ids.contains(*def.init))
    diags.push_back("unknown state '" + *def.init + "' as init");
  return diags;
}

Game::Game(std::vector<std::string> names, std::vector<std::vector<std::string>> moves1,
           std::vector<std::vector<std::string>> moves2, std::vector<Distribution> transitions,
           std::vector<char> target, std::optional<StateId> init)
    : names_(std::move(names)),
      transitions_(std::move(transitions)),
      target_(std::move(target)),
      init_(init) {
  moves_[0] = std::move(moves1);
  moves_[1] = std::move(moves2);
  offsets_.resize(names_.size());
  std::size_t off = 0;
  for (std::size_t s = 0; s < names_.size(); ++s) {
    offsets_[s] = off;
    off += moves_[0][s].size() * moves_[1][s].size();
  }
  if (off != transitions_.size() || target_.size() != names_.size())
    throw InternalError("inconsistent game tables");
}

Game Game::build(const GameDef& def) {
  auto diags = validate_game(def);
  if (!diags.empty()) throw ValidationError(std::move(diags));

  const std::size_t n = def.states.size();
  std::unordered_map<std::string, StateId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.emplace(def.states[i], static_cast<StateId>(i));

  std::vector<std::vector<std::string>> m1(n), m2(n);
  for (std::size_t i = 0; i < n; ++i) {
    m1[i] = def.moves1.at(def.states[i]);
    m2[i] = def.moves2.at(def.states[i]);
  }
  std::vector<std::size_t> offsets(n);
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i] = total;
    total += m1[i].size() * m2[i].size();
  }
  std::vector<Distribution> trans(total);
  for (const auto& t : def.transitions) {
    const StateId s = ids.at(t.from);
    const auto a = std::find(m1[s].begin(), m1[s].end(), t.m1) - m1[s].begin();
    const auto b = std::find(m2[s].begin(), m2[s].end(), t.m2) - m2[s].begin();
    Distribution d;
    for (const auto& [to, p] : t.to)
      if (p > 0.0) d.entries.emplace_back(ids.at(to), p);
    std::sort(d.entries.begin(), d.entries.end());
    normalize(d);
    trans[offsets[s] + a * m2[s].size() + b] = std::move(d);
  }
  std::vector<char> target(n, 0);
  for (const auto& s : def.target) target[ids.at(s)] = 1;
  std::optional<StateId> init;
  if (def.init) init = ids.at(*def.init);
  return Game(def.states, std::move(m1), std::move(m2), std::move(trans), std::move(target), init);
}

std::optional<StateId> Game::find_state(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<StateId>(it - names_.begin());
}

std::optional<MoveId> Game::find_move(Player p, StateId s, const std::string& name) const {
  const auto& list = moves_[index(p)][s];
  auto it = std::find(list.begin(), list.end(), name);
  if (it == list.end()) return std::nullopt;
  return static_cast<MoveId>(it - list.begin());
}

StateSet Game::target() const {
  StateSet out;
  for (StateId s = 0; s < num_states(); ++s)
    if (target_[s]) out.push_back(s);
  return out;
}

GameDef Game::to_def() const {
  GameDef def;
  def.states = names_;
  for (StateId s = 0; s < num_states(); ++s) {
    def.moves1[names_[s]] = moves_[0][s];
    def.moves2[names_[s]] = moves_[1][s];
    for (MoveId a = 0; a < moves_[0][s].size(); ++a) {
      for (MoveId b = 0; b < moves_[1][s].size(); ++b) {
        TransitionDef t{names_[s], moves_[0][s][a], moves_[1][s][b], {}};
        for (const auto& [to, p] : delta(s, a, b).entries) t.to.emplace_back(names_[to], p);
        def.transitions.push_back(std::move(t));
      }
    }
    if (target_[s]) def.target.push_back(names_[s]);
  }
  if (init_) def.init = names_[*init_];
  return def;
}

MixedStrategy MixedStrategy::uniform(const Game& g, Player owner) {
  MixedStrategy st{owner, {}};
  st.dist.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    const auto k = g.num_moves(owner, s);
    st.dist[s].assign(k, 1.0 / static_cast<double>(k));
  }
  return st;
}

MixedStrategy MixedStrategy::dirac(const Game& g, Player owner, const std::vector<MoveId>& choice) {
  if (choice.size() != g.num_states()) throw UsageError("dirac strategy needs one move per state");
  MixedStrategy st{owner, {}};
  st.dist.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (choice[s] >= g.num_moves(owner, s)) throw UsageError("dirac strategy uses unavailable move");
    st.dist[s].assign(g.num_moves(owner, s), 0.0);
    st.dist[s][choice[s]] = 1.0;
  }
  return st;
}

bool MixedStrategy::is_pure() const {
  return std::all_of(dist.begin(), dist.end(), [](const auto& row) {
    return std::count_if(row.begin(), row.end(), [](double p) { return p > 0.0; }) == 1;
  });
}

std::vector<MoveId> MixedStrategy::support(StateId s) const {
  std::vector<MoveId> out;
  for (MoveId m = 0; m < dist[s].size(); ++m)
    if (dist[s][m] > 0.0) out.push_back(m);
  return out;
}

std::vector<double> clean_distribution(std::vector<double> p) {
  double sum = 0.0;
  for (auto& x : p) {
    if (x < kStrategyClip) x = 0.0;
    sum += x;
  }
  if (sum <= 0.0) throw SolverError("strategy has no mass after clipping");
  for (auto& x : p) x /= sum;
  return p;
}

void check_strategy(const Game& g, const MixedStrategy& strat) {
  if (strat.dist.size() != g.num_states())
    throw UsageError("strategy covers " + std::to_string(strat.dist.size()) + " states, game has " +
                     std::to_string(g.num_states()));
  for (StateId s = 0; s < g.num_states(); ++s) {
    const auto& row = strat.dist[s];
    if (row.size() != g.num_moves(strat.owner, s))
      throw UsageError("strategy move count mismatch at state '" + g.state_name(s) + "'");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw UsageError("negative probability in strategy at '" + g.state_name(s) + "'");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTol)
      throw UsageError("strategy at '" + g.state_name(s) + "' does not sum to 1");
  }
}

StateSet dest(const Game& g, StateId s, MoveId a, MoveId b) {
  if (s >= g.num_states()) throw UsageError("state index out of range");
  if (a >= g.num_moves(Player::reach, s) || b >= g.num_moves(Player::safe, s))
    throw UsageError("unavailable move pair at state '" + g.state_name(s) + "'");
  return g.delta(s, a, b).support();
}

StateSet dest_strat(const Game& g, StateId s, const MixedStrategy& reach, const MixedStrategy& safe) {
  StateSet out;
  for (MoveId a : reach.support(s))
    for (MoveId b : safe.support(s)) out = set_union(out, dest(g, s, a, b));
  return out;
}

bool contains(const StateSet& set, StateId s) { return std::binary_search(set.begin(), set.end(), s); }

bool is_subset(const StateSet& a, const StateSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

StateSet set_union(const StateSet& a, const StateSet& b) {
  StateSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

StateSet set_difference(const StateSet& a, const StateSet& b) {
  StateSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<char> to_mask(const StateSet& set, std::size_t n) {
  std::vector<char> m(n, 0);
  for (StateId s : set) m[s] = 1;
  return m;
}

}  // namespace csg

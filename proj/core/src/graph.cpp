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

#include "csg/graph.hpp"

#include <algorithm>
#include <functional>

#include "csg/error.hpp"

namespace csg {

namespace {

bool inside(const Distribution& d, const std::vector<char>& mask) {
  for (const auto& [t, p] : d.entries)
    if (!mask[t]) return false;
  return true;
}

// Tarjan's SCC over states in `nodes`, edges from `succ`.
std::vector<StateSet> strongly_connected(const StateSet& nodes,
                                         const std::vector<StateSet>& succ, std::size_t n) {
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<StateId> stack;
  std::vector<StateSet> out;
  int counter = 0;
  std::function<void(StateId)> visit = [&](StateId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (StateId w : succ[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      StateSet comp;
      StateId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (StateId v : nodes)
    if (index[v] < 0) visit(v);
  return out;
}

}  // namespace

StateSet sure_winning(const Game& g) {
  const auto n = g.num_states();
  std::vector<char> w(n, 0);
  for (StateId s = 0; s < n; ++s) w[s] = g.is_target(s) ? 0 : 1;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<char> next = w;
    for (StateId s = 0; s < n; ++s) {
      if (!w[s]) continue;
      bool keep = false;
      for (MoveId b = 0; b < g.num_moves(Player::safe, s) && !keep; ++b) {
        bool all = true;
        for (MoveId a = 0; a < g.num_moves(Player::reach, s) && all; ++a)
          all = inside(g.delta(s, a, b), w);
        keep = all;
      }
      if (!keep) {
        next[s] = 0;
        changed = true;
      }
    }
    w = std::move(next);
  }
  StateSet out;
  for (StateId s = 0; s < n; ++s)
    if (w[s]) out.push_back(s);
  return out;
}

AttractorResult attractor_with_moves(const Game& g, const StateSet& c, const StateSet& b) {
  if (!is_subset(b, c)) throw UsageError("attractor: base set is not inside the component");
  auto attr = to_mask(b, g.num_states());
  AttractorResult out;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<char> next = attr;
    for (StateId s : c) {
      if (attr[s]) continue;
      for (MoveId a = 0; a < g.num_moves(Player::reach, s); ++a) {
        bool all = true;
        for (MoveId m = 0; m < g.num_moves(Player::safe, s) && all; ++m)
          all = inside(g.delta(s, a, m), attr);
        if (all) {
          next[s] = 1;
          out.moves.emplace_back(s, a);
          changed = true;
          break;
        }
      }
    }
    attr = std::move(next);
  }
  for (StateId s : c)
    if (attr[s]) out.states.push_back(s);
  std::sort(out.moves.begin(), out.moves.end());
  return out;
}

StateSet attractor(const Game& g, const StateSet& c, const StateSet& b) {
  return attractor_with_moves(g, c, b).states;
}

std::vector<MovePair> stay_pairs(const Game& g, StateId s, const std::vector<char>& set_mask) {
  std::vector<MovePair> out;
  for (MoveId a = 0; a < g.num_moves(Player::reach, s); ++a)
    for (MoveId b = 0; b < g.num_moves(Player::safe, s); ++b)
      if (inside(g.delta(s, a, b), set_mask)) out.emplace_back(a, b);
  return out;
}

MecDecomposition mec_decompose(const Game& g, const StateSet& excluded) {
  const auto n = g.num_states();
  StateSet all(n);
  for (StateId s = 0; s < n; ++s) all[s] = s;
  std::vector<StateSet> work{set_difference(all, excluded)};
  MecDecomposition out;
  std::vector<StateSet> succ(n);

  while (!work.empty()) {
    StateSet cand = std::move(work.back());
    work.pop_back();
    // Drop states without a stay pair until stable.
    for (bool changed = true; changed && !cand.empty();) {
      changed = false;
      const auto mask = to_mask(cand, n);
      StateSet kept;
      for (StateId s : cand) {
        if (!stay_pairs(g, s, mask).empty()) kept.push_back(s);
        else changed = true;
      }
      cand = std::move(kept);
    }
    if (cand.empty()) continue;

    const auto mask = to_mask(cand, n);
    std::vector<std::vector<MovePair>> pairs;
    for (StateId s : cand) {
      pairs.push_back(stay_pairs(g, s, mask));
      StateSet next;
      for (const auto& [a, b] : pairs.back()) next = set_union(next, g.delta(s, a, b).support());
      succ[s] = std::move(next);
    }
    auto sccs = strongly_connected(cand, succ, n);
    if (sccs.size() == 1) {
      out.components.push_back({std::move(cand), std::move(pairs)});
    } else {
      for (auto& scc : sccs) work.push_back(std::move(scc));
    }
  }
  std::sort(out.components.begin(), out.components.end(),
            [](const EndComponent& x, const EndComponent& y) { return x.states.front() < y.states.front(); });
  return out;
}

std::vector<std::string> check_end_component(const Game& g, const EndComponent& ec) {
  std::vector<std::string> out;
  if (ec.states.empty()) return {"empty end component"};
  if (!std::is_sorted(ec.states.begin(), ec.states.end())) out.push_back("states not sorted");
  if (ec.stay_pairs.size() != ec.states.size()) return {"stay pair table size mismatch"};
  const auto n = g.num_states();
  const auto mask = to_mask(ec.states, n);
  std::vector<StateSet> succ(n);
  for (std::size_t i = 0; i < ec.states.size(); ++i) {
    const StateId s = ec.states[i];
    if (ec.stay_pairs[i].empty()) out.push_back("state '" + g.state_name(s) + "' has no stay pair");
    for (const auto& [a, b] : ec.stay_pairs[i]) {
      const auto d = dest(g, s, a, b);
      for (StateId t : d) {
        if (!mask[t]) out.push_back("stay pair at '" + g.state_name(s) + "' leaves the component");
      }
      succ[s] = set_union(succ[s], d);
    }
  }
  if (strongly_connected(ec.states, succ, n).size() != 1) out.push_back("not strongly connected");
  return out;
}

}  // namespace csg

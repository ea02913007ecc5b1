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

#include "csg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <string>

#include "csg/bsi.hpp"
#include "csg/bvi.hpp"
#include "csg/error.hpp"
#include "csg/graph.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace csg {

double InducedChain::operator()(StateId s, StateId t) const {
  for (const auto& [u, p] : rows.at(s))
    if (u == t) return p;
  return 0.0;
}

InducedChain induced_chain(const Game& g, const MixedStrategy& reach, const MixedStrategy& safe) {
  if (reach.owner != Player::reach || safe.owner != Player::safe)
    throw UsageError("induced_chain expects a reach and a safe strategy");
  check_strategy(g, reach);
  check_strategy(g, safe);
  const auto n = g.num_states();
  const auto w = to_mask(sure_winning(g), n);
  InducedChain chain{std::vector<std::vector<std::pair<StateId, double>>>(n), g.target()};
  std::vector<double> acc(n, 0.0);
  for (StateId s = 0; s < n; ++s) {
    if (g.is_target(s) || w[s]) {
      chain.rows[s] = {{s, 1.0}};
      continue;
    }
    std::vector<StateId> touched;
    for (MoveId a = 0; a < reach.dist[s].size(); ++a) {
      if (reach.dist[s][a] == 0.0) continue;
      for (MoveId b = 0; b < safe.dist[s].size(); ++b) {
        const double pab = reach.dist[s][a] * safe.dist[s][b];
        if (pab == 0.0) continue;
        for (const auto& [t, q] : g.delta(s, a, b).entries) {
          if (acc[t] == 0.0) touched.push_back(t);
          acc[t] += pab * q;
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (StateId t : touched) {
      if (acc[t] > 0.0) chain.rows[s].emplace_back(t, acc[t]);
      acc[t] = 0.0;
    }
  }
  return chain;
}

namespace {

std::vector<char> reaches_target(const InducedChain& chain) {
  const auto n = chain.num_states();
  std::vector<std::vector<StateId>> pred(n);
  for (StateId s = 0; s < n; ++s)
    for (const auto& [t, p] : chain.rows[s]) pred[t].push_back(s);
  std::vector<char> seen(n, 0);
  std::deque<StateId> queue(chain.target.begin(), chain.target.end());
  for (StateId t : chain.target) seen[t] = 1;
  while (!queue.empty()) {
    const StateId t = queue.front();
    queue.pop_front();
    for (StateId s : pred[t])
      if (!seen[s]) {
        seen[s] = 1;
        queue.push_back(s);
      }
  }
  return seen;
}

}  // namespace

Valuation chain_reach(const InducedChain& chain) {
  const auto n = chain.num_states();
  const auto positive = reaches_target(chain);
  const auto tmask = to_mask(chain.target, n);
  std::vector<std::size_t> index(n, SIZE_MAX);
  std::vector<StateId> unknown;
  for (StateId s = 0; s < n; ++s)
    if (positive[s] && !tmask[s]) {
      index[s] = unknown.size();
      unknown.push_back(s);
    }
  const auto k = unknown.size();
  std::vector<double> a(k * k, 0.0), b(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    a[i * k + i] += 1.0;
    for (const auto& [t, p] : chain.rows[unknown[i]]) {
      if (tmask[t]) b[i] += p;
      else if (index[t] != SIZE_MAX) a[i * k + index[t]] -= p;
    }
  }
  const auto x = detail::solve_dense(std::move(a), std::move(b));
  Valuation v(n, 0.0);
  for (StateId t : chain.target) v[t] = 1.0;
  for (std::size_t i = 0; i < k; ++i) v[unknown[i]] = std::clamp(x[i], 0.0, 1.0);
  return v;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform draw from [0, n) by rejection, identical on every platform.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

}  // namespace

MonteCarloEstimate monte_carlo(const InducedChain& chain, StateId start, std::size_t samples,
                               std::size_t horizon_cap, std::uint64_t seed, unsigned threads) {
  if (samples < 1) throw UsageError("samples must be at least 1");
  if (start >= chain.num_states()) throw UsageError("start state out of range");
  const auto positive = reaches_target(chain);
  const auto tmask = to_mask(chain.target, chain.num_states());
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<std::size_t> hits(blocks, 0), cut(blocks, 0);
  detail::parallel_for(blocks, threads, [&](std::size_t blk) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(blk)));
    const std::size_t count = std::min(kBlock, samples - blk * kBlock);
    for (std::size_t i = 0; i < count; ++i) {
      StateId s = start;
      std::size_t steps = 0;
      for (;;) {
        if (tmask[s]) {
          ++hits[blk];
          break;
        }
        if (!positive[s]) break;
        if (steps++ == horizon_cap) {
          ++cut[blk];
          break;
        }
        const double u = unit(rng);
        const auto& row = chain.rows[s];
        double acc = 0.0;
        StateId next = row.back().first;
        for (const auto& [t, p] : row) {
          acc += p;
          if (u < acc) {
            next = t;
            break;
          }
        }
        s = next;
      }
    }
  });
  MonteCarloEstimate est;
  est.samples = samples;
  for (std::size_t b = 0; b < blocks; ++b) {
    est.hits += hits[b];
    est.truncated += cut[b];
  }
  const double p = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.estimate = p;
  est.half_width = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return est;
}

void RandomGameSpec::validate() const {
  if (state_count < 1) throw UsageError("state count must be at least 1");
  if (max_moves_per_player < 1) throw UsageError("moves per player must be at least 1");
  if (branching < 1) throw UsageError("branching must be at least 1");
  if (!(target_fraction > 0.0 && target_fraction < 1.0)) throw UsageError("target fraction must lie in (0,1)");
  if (!(ec_bias > 0.0 && ec_bias < 1.0)) throw UsageError("ec bias must lie in (0,1)");
}

GameDef gen_random_game(const RandomGameSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const std::size_t n = spec.state_count;
  GameDef def;
  for (std::size_t i = 0; i < n; ++i) def.states.push_back("s" + std::to_string(i));

  // Target: a random subset of the requested size.
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(spec.target_fraction * n)));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[below(rng, i)]);
  std::vector<char> is_target(n, 0);
  for (std::size_t i = 0; i < std::min(k, n); ++i) is_target[order[i]] = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (is_target[i]) def.target.push_back(def.states[i]);

  auto moves = [&](Player p, const std::string& prefix) {
    std::size_t count = 1;
    if (spec.trivial_player != p) count = 1 + below(rng, spec.max_moves_per_player);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
    return out;
  };

  // Successor partner for injected two-cycles on the first move pair.
  std::vector<std::optional<std::size_t>> partner(n);
  std::vector<std::size_t> free_states;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_target[i]) free_states.push_back(i);
  if (free_states.size() >= 2) {
    for (std::size_t s : free_states) {
      if (partner[s] || unit(rng) >= spec.ec_bias) continue;
      const std::size_t t = free_states[below(rng, free_states.size())];
      if (t == s || partner[t]) continue;
      partner[s] = t;
      partner[t] = s;
    }
  }

  for (std::size_t s = 0; s < n; ++s) {
    const auto& name = def.states[s];
    if (is_target[s]) {
      def.moves1[name] = {"_"};
      def.moves2[name] = {"_"};
      def.transitions.push_back({name, "_", "_", {{name, 1.0}}});
      continue;
    }
    def.moves1[name] = moves(Player::reach, "a");
    def.moves2[name] = moves(Player::safe, "b");
    for (std::size_t a = 0; a < def.moves1[name].size(); ++a) {
      for (std::size_t b = 0; b < def.moves2[name].size(); ++b) {
        std::vector<std::pair<StateId, double>> d;
        if (a == 0 && b == 0 && partner[s]) {
          d = {{static_cast<StateId>(*partner[s]), 1.0}};
        } else {
          // Distinct successors with probabilities in sixteenths.
          const std::size_t m = std::min<std::size_t>(1 + below(rng, spec.branching), std::min<std::size_t>(n, 16));
          std::vector<StateId> succ;
          while (succ.size() < m) {
            const auto t = static_cast<StateId>(below(rng, n));
            if (std::find(succ.begin(), succ.end(), t) == succ.end()) succ.push_back(t);
          }
          std::vector<std::uint64_t> cuts{0, 16};
          while (cuts.size() < m + 1) {
            const auto c = 1 + below(rng, 15);
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
          }
          std::sort(cuts.begin(), cuts.end());
          for (std::size_t i = 0; i < m; ++i)
            d.emplace_back(succ[i], static_cast<double>(cuts[i + 1] - cuts[i]) / 16.0);
          std::sort(d.begin(), d.end());
        }
        TransitionDef tr{name, def.moves1[name][a], def.moves2[name][b], {}};
        for (const auto& [t, q] : d) tr.to.emplace_back(def.states[t], q);
        def.transitions.push_back(std::move(tr));
      }
    }
  }
  def.init = def.states[free_states.empty() ? 0 : free_states.front()];
  return def;
}

Valuation mdp_optimal_reach(const Game& g) {
  const auto n = g.num_states();
  bool reach_moves = false, safe_moves = false;
  for (StateId s = 0; s < n; ++s) {
    reach_moves = reach_moves || g.num_moves(Player::reach, s) > 1;
    safe_moves = safe_moves || g.num_moves(Player::safe, s) > 1;
  }
  if (reach_moves && safe_moves) throw UsageError("both players have a choice; not an MDP");
  const Player ctrl = safe_moves ? Player::safe : Player::reach;
  const bool maximize = ctrl == Player::reach;

  auto action = [&](StateId s, MoveId m) -> const Distribution& {
    return ctrl == Player::reach ? g.delta(s, m, 0) : g.delta(s, 0, m);
  };
  auto q = [&](const Valuation& v, StateId s, MoveId m) {
    double e = 0.0;
    for (const auto& [t, p] : action(s, m).entries) e += p * v[t];
    return e;
  };

  std::vector<MoveId> policy(n, 0);
  if (!maximize) {
    // Start from a policy that avoids the target wherever that is possible,
    // so that evaluation never sees a spurious zero-reward cycle as optimal.
    std::vector<char> avoid(n);
    for (StateId s = 0; s < n; ++s) avoid[s] = !g.is_target(s);
    for (bool changed = true; changed;) {
      changed = false;
      for (StateId s = 0; s < n; ++s) {
        if (!avoid[s]) continue;
        bool ok = false;
        for (MoveId m = 0; m < g.num_moves(ctrl, s) && !ok; ++m) {
          ok = true;
          for (const auto& [t, p] : action(s, m).entries) ok = ok && avoid[t];
          if (ok) policy[s] = m;
        }
        if (!ok) {
          avoid[s] = 0;
          changed = true;
        }
      }
    }
  }
  auto evaluate = [&] {
    auto reach = MixedStrategy::uniform(g, Player::reach);
    auto safe = MixedStrategy::uniform(g, Player::safe);
    auto& own = ctrl == Player::reach ? reach : safe;
    own = MixedStrategy::dirac(g, ctrl, policy);
    return chain_reach(induced_chain(g, reach, safe));
  };
  for (std::size_t round = 0; round < 1'000'000; ++round) {
    const Valuation v = evaluate();
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (g.is_target(s)) continue;
      MoveId best = policy[s];
      double bq = q(v, s, best);
      for (MoveId m = 0; m < g.num_moves(ctrl, s); ++m) {
        const double c = q(v, s, m);
        if (maximize ? c > bq + 1e-12 : c < bq - 1e-12) {
          best = m;
          bq = c;
        }
      }
      if (best != policy[s]) {
        policy[s] = best;
        changed = true;
      }
    }
    if (!changed) return v;
  }
  throw InternalError("policy iteration did not terminate");
}

ReferenceBounds reference_bounds(const Game& g, double epsilon, std::size_t max_iters) {
  BviConfig cfg;
  cfg.epsilon = epsilon;
  cfg.max_iters = max_iters;
  cfg.stop_at_fixpoint = false;
  cfg.best_exit_tol = std::min(cfg.best_exit_tol, epsilon / 10);
  // Without an initial state the gap is measured at every state.
  GameDef def = g.to_def();
  def.init.reset();
  const Game open = Game::build(def);
  const auto r = run_bvi(open, cfg);
  const auto l = eval_reach_strategy(open, r.reach_strategy);
  const auto w = eval_safe_strategy(open, r.safe_strategy);
  ReferenceBounds out{r.lower, r.upper, true};
  for (std::size_t s = 0; s < out.lower.size(); ++s) {
    out.lower[s] = std::max(out.lower[s], l[s]);
    out.upper[s] = std::min(out.upper[s], 1.0 - w[s]);
    if (out.upper[s] - out.lower[s] > epsilon) out.converged = false;
  }
  return out;
}

Valuation reference_value(const Game& g, double epsilon) {
  const auto b = reference_bounds(g, epsilon);
  Valuation mid(b.lower.size());
  for (std::size_t s = 0; s < mid.size(); ++s) mid[s] = 0.5 * (b.lower[s] + b.upper[s]);
  return mid;
}

}  // namespace csg

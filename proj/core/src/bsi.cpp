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

#include "csg/bsi.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "csg/error.hpp"
#include "csg/pre.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace csg {

void SiConfig::validate() const {
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  if (max_iters < 1) throw UsageError("max_iters must be at least 1");
  if (!(improve_tol > 0.0)) throw UsageError("improve_tol must be positive");
  if (!(best_exit_tol > 0.0)) throw UsageError("best_exit_tol must be positive");
}

namespace {

using Row = std::vector<std::pair<StateId, double>>;

// Single-player process left after fixing one player's strategy.
struct InducedMdp {
  std::vector<std::vector<Row>> actions;  // actions[s][m] over the free player's moves
  std::vector<char> target;
};

InducedMdp fix_strategy(const Game& g, const MixedStrategy& st) {
  check_strategy(g, st);
  const auto n = g.num_states();
  InducedMdp mdp{std::vector<std::vector<Row>>(n), std::vector<char>(n, 0)};
  std::vector<double> acc(n, 0.0);
  std::vector<StateId> touched;
  const Player free = opponent(st.owner);
  for (StateId s = 0; s < n; ++s) {
    mdp.target[s] = g.is_target(s);
    for (MoveId m = 0; m < g.num_moves(free, s); ++m) {
      for (MoveId f = 0; f < st.dist[s].size(); ++f) {
        const double w = st.dist[s][f];
        if (w == 0.0) continue;
        const auto& d = st.owner == Player::reach ? g.delta(s, f, m) : g.delta(s, m, f);
        for (const auto& [t, q] : d.entries) {
          if (acc[t] == 0.0) touched.push_back(t);
          acc[t] += w * q;
        }
      }
      std::sort(touched.begin(), touched.end());
      Row row;
      for (StateId t : touched) {
        if (acc[t] > 0.0) row.emplace_back(t, acc[t]);
        acc[t] = 0.0;
      }
      touched.clear();
      mdp.actions[s].push_back(std::move(row));
    }
  }
  return mdp;
}

// States from which the target is unreachable when `policy` fixes the action
// (or, with policy empty, under any action).
std::vector<char> cannot_reach(const InducedMdp& mdp, const std::vector<std::size_t>* policy) {
  const auto n = mdp.actions.size();
  std::vector<std::vector<StateId>> pred(n);
  for (StateId s = 0; s < n; ++s) {
    if (mdp.target[s]) continue;
    auto add = [&](const Row& r) {
      for (const auto& [t, q] : r) pred[t].push_back(s);
    };
    if (policy) add(mdp.actions[s][(*policy)[s]]);
    else
      for (const auto& r : mdp.actions[s]) add(r);
  }
  std::vector<char> reach(n, 0);
  std::deque<StateId> queue;
  for (StateId s = 0; s < n; ++s)
    if (mdp.target[s]) {
      reach[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    const StateId t = queue.front();
    queue.pop_front();
    for (StateId s : pred[t])
      if (!reach[s]) {
        reach[s] = 1;
        queue.push_back(s);
      }
  }
  for (auto& r : reach) r = !r;
  return reach;
}

// Largest set of non-target states where some action keeps the play inside.
std::vector<char> avoid_forever(const InducedMdp& mdp, std::vector<std::size_t>& witness) {
  const auto n = mdp.actions.size();
  std::vector<char> z(n);
  for (StateId s = 0; s < n; ++s) z[s] = !mdp.target[s];
  witness.assign(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (!z[s]) continue;
      bool found = false;
      for (std::size_t m = 0; m < mdp.actions[s].size() && !found; ++m) {
        found = std::all_of(mdp.actions[s][m].begin(), mdp.actions[s][m].end(),
                            [&](const auto& e) { return z[e.first] != 0; });
        if (found) witness[s] = m;
      }
      if (!found) {
        z[s] = 0;
        changed = true;
      }
    }
  }
  return z;
}

Valuation evaluate_policy(const InducedMdp& mdp, const std::vector<std::size_t>& policy) {
  const auto n = mdp.actions.size();
  const auto zero = cannot_reach(mdp, &policy);
  std::vector<std::size_t> index(n, SIZE_MAX);
  std::vector<StateId> unknown;
  for (StateId s = 0; s < n; ++s)
    if (!mdp.target[s] && !zero[s]) {
      index[s] = unknown.size();
      unknown.push_back(s);
    }
  const auto k = unknown.size();
  std::vector<double> a(k * k, 0.0), b(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    a[i * k + i] = 1.0;
    for (const auto& [t, q] : mdp.actions[unknown[i]][policy[unknown[i]]]) {
      if (mdp.target[t]) b[i] += q;
      else if (index[t] != SIZE_MAX) a[i * k + index[t]] -= q;
    }
  }
  const auto x = detail::solve_dense(std::move(a), std::move(b));
  Valuation v(n, 0.0);
  for (StateId s = 0; s < n; ++s)
    if (mdp.target[s]) v[s] = 1.0;
  for (std::size_t i = 0; i < k; ++i) v[unknown[i]] = std::clamp(x[i], 0.0, 1.0);
  return v;
}

double q_value(const Row& r, const Valuation& v) {
  double e = 0.0;
  for (const auto& [t, q] : r) e += q * v[t];
  return e;
}

struct Optimum {
  Valuation values;
  std::vector<std::size_t> policy;
};

// Optimal reachability of the target in the induced process.
Optimum solve_mdp(const InducedMdp& mdp, bool minimize, EvalMode mode, double tol) {
  const auto n = mdp.actions.size();
  auto better = [&](double cand, double cur, double margin) {
    return minimize ? cand < cur - margin : cand > cur + margin;
  };
  std::vector<std::size_t> policy(n, 0);
  std::vector<char> frozen(n, 0);
  if (minimize) frozen = avoid_forever(mdp, policy);
  for (StateId s = 0; s < n; ++s)
    if (!frozen[s]) policy[s] = 0;

  auto greedy = [&](const Valuation& v, StateId s) {
    std::size_t best = policy[s];
    double bq = q_value(mdp.actions[s][best], v);
    for (std::size_t m = 0; m < mdp.actions[s].size(); ++m) {
      const double q = q_value(mdp.actions[s][m], v);
      if (better(q, bq, 1e-12)) {
        best = m;
        bq = q;
      }
    }
    return std::pair{best, bq};
  };

  if (mode == EvalMode::iterative) {
    Valuation v(n, 0.0);
    for (StateId s = 0; s < n; ++s)
      if (mdp.target[s]) v[s] = 1.0;
    for (std::size_t it = 0; it < 10'000'000; ++it) {
      Valuation next = v;
      for (StateId s = 0; s < n; ++s) {
        if (mdp.target[s] || frozen[s]) continue;
        double best = q_value(mdp.actions[s][0], v);
        for (std::size_t m = 1; m < mdp.actions[s].size(); ++m) {
          const double q = q_value(mdp.actions[s][m], v);
          best = minimize ? std::min(best, q) : std::max(best, q);
        }
        next[s] = best;
      }
      double diff = 0.0;
      for (StateId s = 0; s < n; ++s) diff = std::max(diff, std::abs(next[s] - v[s]));
      v = std::move(next);
      if (diff < tol) break;
    }
    for (StateId s = 0; s < n; ++s)
      if (!mdp.target[s] && !frozen[s]) policy[s] = greedy(v, s).first;
    return {std::move(v), std::move(policy)};
  }

  for (std::size_t round = 0;; ++round) {
    if (round > 100'000) throw InternalError("policy iteration did not terminate");
    Valuation v = evaluate_policy(mdp, policy);
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (mdp.target[s] || frozen[s]) continue;
      const auto [best, bq] = greedy(v, s);
      if (best != policy[s]) {
        policy[s] = best;
        changed = true;
      }
    }
    if (!changed) return {std::move(v), std::move(policy)};
  }
}

MixedStrategy policy_strategy(const Game& g, Player owner, const std::vector<std::size_t>& policy) {
  std::vector<MoveId> choice(policy.begin(), policy.end());
  return MixedStrategy::dirac(g, owner, choice);
}

}  // namespace

StrategyEvaluation evaluate_reach_strategy(const Game& g, const MixedStrategy& sigma, EvalMode mode,
                                           double tol) {
  if (sigma.owner != Player::reach) throw UsageError("expected a reach strategy");
  auto opt = solve_mdp(fix_strategy(g, sigma), true, mode, tol);
  return {std::move(opt.values), policy_strategy(g, Player::safe, opt.policy)};
}

Valuation eval_reach_strategy(const Game& g, const MixedStrategy& sigma, EvalMode mode, double tol) {
  return evaluate_reach_strategy(g, sigma, mode, tol).values;
}

StrategyEvaluation evaluate_safe_strategy(const Game& g, const MixedStrategy& tau, EvalMode mode,
                                          double tol) {
  if (tau.owner != Player::safe) throw UsageError("expected a safe strategy");
  auto opt = solve_mdp(fix_strategy(g, tau), false, mode, tol);
  const double slack = mode == EvalMode::iterative ? tol : 0.0;
  for (auto& x : opt.values) x = std::max(0.0, 1.0 - std::min(1.0, x + slack));
  return {std::move(opt.values), policy_strategy(g, Player::reach, opt.policy)};
}

Valuation eval_safe_strategy(const Game& g, const MixedStrategy& tau, EvalMode mode, double tol) {
  return evaluate_safe_strategy(g, tau, mode, tol).values;
}

ImprovementSets improvement_sets(const PreparedGame& p, const Valuation& lower, const Valuation& upper,
                                 double improve_tol) {
  ImprovementSets out;
  Valuation safety(upper.size());
  for (std::size_t s = 0; s < upper.size(); ++s) safety[s] = 1.0 - upper[s];
  for (StateId s = 0; s < p.game.num_states(); ++s) {
    if (p.fixed[s]) continue;
    if (pre_opt_value(p.game, lower, s, Player::reach).value > lower[s] + improve_tol) out.lower.push_back(s);
    if (pre_opt_value(p.game, safety, s, Player::safe).value > safety[s] + improve_tol) out.upper.push_back(s);
  }
  return out;
}

std::pair<Valuation, MixedStrategy> deflate_si(const Game& g, MixedStrategy tau, Valuation upper,
                                               const StateSet& c, double tol) {
  if (tau.owner != Player::safe) throw UsageError("deflate_si expects a safe strategy");
  upper = deflate(g, std::move(upper), c, tol, [&](const DeflateRound& r) {
    for (std::size_t i = 0; i < r.remaining.size(); ++i) {
      const StateId s = r.remaining[i];
      const auto& e = r.exit.exits[i];
      if (e && contains(r.exit.witnesses, s)) tau.dist[s] = e->col_strategy;
      else tau.dist[s] = pre_opt(g, r.updated, s, Player::reach).min_strategy;
    }
  });
  return {std::move(upper), std::move(tau)};
}

Valuation inflate(const Game& g, Valuation w, const StateSet& c, double tol) {
  StateSet rest = c;
  const auto n = g.num_states();
  while (!rest.empty()) {
    const auto mask = to_mask(rest, n);
    std::vector<std::optional<double>> exits;
    std::optional<double> best;
    for (StateId s : rest) {
      const auto rows = g.num_moves(Player::reach, s);
      const auto cols = g.num_moves(Player::safe, s);
      // Reach's exit game on the reachability estimate 1 - w.
      PayoffMatrix m(rows, cols);
      std::vector<char> staying(rows, 1), leaves(rows * cols, 0);
      for (MoveId a = 0; a < rows; ++a) {
        for (MoveId b = 0; b < cols; ++b) {
          double safe_mass = 0.0;
          bool out = false;
          for (const auto& [t, q] : g.delta(s, a, b).entries) {
            safe_mass += q * w[t];
            out = out || !mask[t];
          }
          m(a, b) = 1.0 - safe_mass;
          if (out) {
            leaves[a * cols + b] = 1;
            staying[a] = 0;
          }
        }
      }
      const auto sol = solve_exit_matrix(m, staying, leaves);
      exits.push_back(sol ? std::optional<double>(sol->value) : std::nullopt);
      if (sol) best = best ? std::max(*best, sol->value) : sol->value;
    }
    if (!best) throw InternalError("end component has no exit (it should lie in the winning region)");
    StateSet witnesses;
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (exits[i] && *exits[i] >= *best - tol) witnesses.push_back(rest[i]);
    const StateSet attracted = attractor(g, rest, witnesses);
    for (StateId s : rest) w[s] = std::max(w[s], 1.0 - *best);
    rest = set_difference(rest, attracted);
  }
  return w;
}

namespace {

double gap_of(const Valuation& l, const Valuation& u, std::optional<StateId> init) {
  if (init) return u[*init] - l[*init];
  double g = 0.0;
  for (std::size_t s = 0; s < l.size(); ++s) g = std::max(g, u[s] - l[s]);
  return g;
}

MixedStrategy to_working(const PreparedGame& p, const Game& original, const MixedStrategy& st) {
  check_strategy(original, st);
  MixedStrategy out = MixedStrategy::uniform(p.game, st.owner);
  for (StateId s = 0; s < p.original_states; ++s) {
    const StateId w = p.to_working[s];
    if (!p.fixed[w]) out.dist[w] = st.dist[s];
  }
  return out;
}

}  // namespace

BoundsResult run_bsi(const Game& g, const SiConfig& cfg) {
  cfg.validate();
  const PreparedGame p = prepare(g, cfg.collapse_sinks);
  const Game& wg = p.game;
  const auto n = wg.num_states();
  const double eval_tol = cfg.epsilon / 10.0;

  MixedStrategy sigma = cfg.seed_reach ? to_working(p, g, *cfg.seed_reach)
                                       : MixedStrategy::uniform(wg, Player::reach);
  MixedStrategy tau = cfg.seed_safe ? to_working(p, g, *cfg.seed_safe)
                                    : MixedStrategy::uniform(wg, Player::safe);

  BoundsResult res;
  std::set<std::string> diagnostics;
  Valuation lower, upper;
  auto evaluate = [&] {
    lower = eval_reach_strategy(wg, sigma, cfg.eval_mode, eval_tol);
    Valuation safety = eval_safe_strategy(wg, tau, cfg.eval_mode, eval_tol);
    upper.resize(n);
    for (StateId s = 0; s < n; ++s) upper[s] = 1.0 - safety[s];
  };

  for (std::size_t k = 0;; ++k) {
    evaluate();
    res.iterations = k;
    if (gap_of(lower, upper, wg.init()) < cfg.epsilon) {
      res.termination = Termination::gap;
      break;
    }
    if (k >= cfg.max_iters) {
      res.termination = Termination::iter_cap;
      break;
    }
    const Valuation before = upper;
    for (const auto& ec : p.mecs) {
      std::tie(upper, tau) = deflate_si(wg, std::move(tau), std::move(upper), ec.states, cfg.best_exit_tol);
    }
    if (cfg.trace) res.trace.push_back({k, p.expand(lower), p.expand(before), p.expand(upper)});

    const auto sets = improvement_sets(p, lower, upper, cfg.improve_tol);
    if (sets.lower.empty()) {
      res.termination = Termination::lower_fix;
      break;
    }
    if (sets.upper.empty()) {
      res.termination = Termination::upper_fix;
      break;
    }
    Valuation safety(n);
    for (StateId s = 0; s < n; ++s) safety[s] = 1.0 - upper[s];
    detail::parallel_for(sets.lower.size(), cfg.threads, [&](std::size_t i) {
      const StateId s = sets.lower[i];
      sigma.dist[s] = pre_opt_value(wg, lower, s, Player::reach).max_strategy;
    });
    detail::parallel_for(sets.upper.size(), cfg.threads, [&](std::size_t i) {
      const StateId s = sets.upper[i];
      tau.dist[s] = pre_opt_value(wg, safety, s, Player::safe).max_strategy;
    });
  }
  // Reported bounds are the values of the returned strategies.
  if (res.termination == Termination::lower_fix || res.termination == Termination::upper_fix) evaluate();

  res.lower = p.expand(lower);
  res.upper = p.expand(upper);
  res.reach_strategy = p.expand(sigma, g);
  res.safe_strategy = p.expand(tau, g);
  res.winning = p.expand_set(p.winning);
  for (const auto& ec : p.mecs) {
    EndComponent orig{p.expand_set(ec.states), {}};
    for (StateId s : orig.states) {
      const auto pos = std::find(ec.states.begin(), ec.states.end(), p.to_working[s]) - ec.states.begin();
      orig.stay_pairs.push_back(ec.stay_pairs[static_cast<std::size_t>(pos)]);
    }
    res.mecs.components.push_back(std::move(orig));
  }
  res.diagnostics.assign(diagnostics.begin(), diagnostics.end());
  return res;
}

}  // namespace csg

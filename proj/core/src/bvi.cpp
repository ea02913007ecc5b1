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

#include "csg/bvi.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "csg/bsi.hpp"
#include "csg/error.hpp"
#include "csg/pre.hpp"
#include "parallel.hpp"

namespace csg {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::gap: return "gap";
    case Termination::lower_fix: return "lowerFix";
    case Termination::upper_fix: return "upperFix";
    case Termination::iter_cap: return "iterCap";
  }
  return "?";
}

void BviConfig::validate() const {
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  if (max_iters < 1) throw UsageError("max_iters must be at least 1");
  if (!(lp_tol > 0.0)) throw UsageError("lp_tol must be positive");
  if (!(best_exit_tol > 0.0)) throw UsageError("best_exit_tol must be positive");
}

double max_diff(const Valuation& a, const Valuation& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

PreparedGame prepare(const Game& g, bool collapse_sinks) {
  const auto n = g.num_states();
  const StateSet target = g.target();
  const StateSet winning = sure_winning(g);
  const auto fixed_orig = to_mask(set_union(target, winning), n);

  PreparedGame p{g, {}, {}, {}, {}, std::vector<StateId>(n), n, winning};
  if (!collapse_sinks) {
    std::vector<std::string> names(n);
    std::vector<std::vector<std::string>> m1(n), m2(n);
    std::vector<Distribution> trans;
    std::vector<char> tmask(n, 0);
    for (StateId s = 0; s < n; ++s) {
      names[s] = g.state_name(s);
      m1[s] = g.move_names(Player::reach, s);
      m2[s] = g.move_names(Player::safe, s);
      tmask[s] = g.is_target(s);
      for (MoveId a = 0; a < m1[s].size(); ++a)
        for (MoveId b = 0; b < m2[s].size(); ++b)
          trans.push_back(fixed_orig[s] ? Distribution{{{s, 1.0}}} : g.delta(s, a, b));
      p.to_working[s] = s;
    }
    p.game = Game(std::move(names), std::move(m1), std::move(m2), std::move(trans), std::move(tmask),
                  g.init());
    p.target = target;
    p.winning = winning;
  } else {
    std::vector<std::string> names;
    StateId next = 0;
    for (StateId s = 0; s < n; ++s)
      if (!fixed_orig[s]) {
        p.to_working[s] = next++;
        names.push_back(g.state_name(s));
      }
    std::optional<StateId> tsink, wsink;
    if (!target.empty()) {
      tsink = next++;
      names.push_back("__target");
    }
    if (!winning.empty()) {
      wsink = next++;
      names.push_back("__winning");
    }
    for (StateId s : target) p.to_working[s] = *tsink;
    for (StateId s : winning) p.to_working[s] = *wsink;

    std::vector<std::vector<std::string>> m1, m2;
    std::vector<Distribution> trans;
    std::vector<char> tmask(next, 0);
    for (StateId s = 0; s < n; ++s) {
      if (fixed_orig[s]) continue;
      m1.push_back(g.move_names(Player::reach, s));
      m2.push_back(g.move_names(Player::safe, s));
      for (MoveId a = 0; a < m1.back().size(); ++a) {
        for (MoveId b = 0; b < m2.back().size(); ++b) {
          Distribution d;
          for (const auto& [t, q] : g.delta(s, a, b).entries) {
            const StateId w = p.to_working[t];
            auto it = std::find_if(d.entries.begin(), d.entries.end(),
                                   [w](const auto& e) { return e.first == w; });
            if (it == d.entries.end()) d.entries.emplace_back(w, q);
            else it->second += q;
          }
          std::sort(d.entries.begin(), d.entries.end());
          trans.push_back(std::move(d));
        }
      }
    }
    for (auto sink : {tsink, wsink}) {
      if (!sink) continue;
      m1.push_back({"_"});
      m2.push_back({"_"});
      trans.push_back(Distribution{{{*sink, 1.0}}});
    }
    if (tsink) {
      tmask[*tsink] = 1;
      p.target = {*tsink};
    }
    if (wsink) p.winning = {*wsink};
    std::optional<StateId> init;
    if (g.init()) init = p.to_working[*g.init()];
    p.game = Game(std::move(names), std::move(m1), std::move(m2), std::move(trans), std::move(tmask), init);
  }
  const StateSet fixed = set_union(p.target, p.winning);
  p.fixed = to_mask(fixed, p.game.num_states());
  p.mecs = mec_decompose(p.game, fixed).components;
  return p;
}

Valuation PreparedGame::expand(const Valuation& v) const {
  Valuation out(original_states);
  for (std::size_t s = 0; s < original_states; ++s) out[s] = v[to_working[s]];
  return out;
}

MixedStrategy PreparedGame::expand(const MixedStrategy& st, const Game& original) const {
  MixedStrategy out = MixedStrategy::uniform(original, st.owner);
  for (StateId s = 0; s < original_states; ++s) {
    const StateId w = to_working[s];
    if (st.dist[w].size() == out.dist[s].size() && !(fixed[w] && game.num_states() != original_states))
      out.dist[s] = st.dist[w];
  }
  if (st.owner == Player::safe) {
    const auto wmask = to_mask(winning_original, original_states);
    for (StateId s : winning_original) {
      for (MoveId b = 0; b < original.num_moves(Player::safe, s); ++b) {
        bool keeps = true;
        for (MoveId a = 0; a < original.num_moves(Player::reach, s) && keeps; ++a)
          for (const auto& [t, q] : original.delta(s, a, b).entries) keeps = keeps && wmask[t];
        if (keeps) {
          out.dist[s].assign(out.dist[s].size(), 0.0);
          out.dist[s][b] = 1.0;
          break;
        }
      }
    }
  }
  return out;
}

StateSet PreparedGame::expand_set(const StateSet& set) const {
  const auto mask = to_mask(set, game.num_states());
  StateSet out;
  for (StateId s = 0; s < original_states; ++s)
    if (mask[to_working[s]]) out.push_back(s);
  return out;
}

Valuation initial_lower(const PreparedGame& p) {
  Valuation l(p.game.num_states(), 0.0);
  for (StateId s : p.target) l[s] = 1.0;
  return l;
}

Valuation initial_upper(const PreparedGame& p) {
  Valuation u(p.game.num_states(), 1.0);
  for (StateId s : p.winning) u[s] = 0.0;
  return u;
}

Valuation lower_step(const PreparedGame& p, const Valuation& l, unsigned threads) {
  Valuation next = l;
  detail::parallel_for(p.game.num_states(), threads, [&](std::size_t s) {
    if (!p.fixed[s]) next[s] = pre_opt_value(p.game, l, static_cast<StateId>(s), Player::reach).value;
  });
  return next;
}

Valuation upper_step(const PreparedGame& p, const Valuation& u, unsigned threads) {
  return lower_step(p, u, threads);
}

BestExit best_exit(const Game& g, const Valuation& v, const StateSet& c, double tol) {
  BestExit out;
  out.exits.reserve(c.size());
  bool any = false;
  for (StateId s : c) {
    out.exits.push_back(solve_exit(g, v, s, c));
    if (out.exits.back()) {
      out.value = any ? std::max(out.value, out.exits.back()->value) : out.exits.back()->value;
      any = true;
    }
  }
  if (!any) throw InternalError("end component has no exit (it should lie in the winning region)");
  for (std::size_t i = 0; i < c.size(); ++i)
    if (out.exits[i] && out.exits[i]->value >= out.value - tol) out.witnesses.push_back(c[i]);
  return out;
}

Valuation deflate(const Game& g, Valuation v, const StateSet& c, double tol,
                  const std::function<void(const DeflateRound&)>& on_round) {
  StateSet rest = c;
  while (!rest.empty()) {
    const BestExit be = best_exit(g, v, rest, tol);
    const StateSet attracted = attractor(g, rest, be.witnesses);
    if (attracted.empty()) throw InternalError("DEFLATE produced an empty attractor");
    for (StateId s : rest) v[s] = std::min(v[s], be.value);
    if (on_round) on_round(DeflateRound{rest, be, attracted, v});
    rest = set_difference(rest, attracted);
  }
  return v;
}

namespace {

double gap_of(const Valuation& l, const Valuation& u, std::optional<StateId> init) {
  if (init) return u[*init] - l[*init];
  double g = 0.0;
  for (std::size_t s = 0; s < l.size(); ++s) g = std::max(g, u[s] - l[s]);
  return g;
}

}  // namespace

BoundsResult run_bvi(const Game& g, const BviConfig& cfg) {
  cfg.validate();
  const PreparedGame p = prepare(g, cfg.collapse_sinks);
  const Game& wg = p.game;
  const auto n = wg.num_states();

  Valuation lower = initial_lower(p);
  Valuation upper = initial_upper(p);
  MixedStrategy reach = MixedStrategy::uniform(wg, Player::reach);
  std::set<std::string> diagnostics;

  BoundsResult res;
  for (std::size_t k = 1;; ++k) {
    // Lower sweep. The reach strategy only switches on strict improvement so
    // ties never trade a leaving choice for a looping one.
    Valuation next_lower = lower;
    detail::parallel_for(n, cfg.threads, [&](std::size_t i) {
      const auto s = static_cast<StateId>(i);
      if (p.fixed[s]) return;
      const PayoffMatrix m = payoff_matrix(wg, lower, s);
      auto sol = solve_matrix_row(m);
      next_lower[s] = sol.value;
      if (sol.value > row_guarantee(m, reach.dist[s]) + cfg.lp_tol) reach.dist[s] = std::move(sol.row_strategy);
    });

    const Valuation before = upper_step(p, upper, cfg.threads);
    Valuation next_upper = before;
    if (!cfg.naive_upper) {
      for (const auto& ec : p.mecs) {
        next_upper = deflate(wg, std::move(next_upper), ec.states, cfg.best_exit_tol,
                             [&](const DeflateRound& r) {
                               for (std::size_t i = 0; i < r.remaining.size(); ++i) {
                                 const auto& e = r.exit.exits[i];
                                 if (e && contains(r.exit.witnesses, r.remaining[i]) &&
                                     *e->exit_certificate <= kExitFloor)
                                   diagnostics.insert("non-attained exit at state '" +
                                                      wg.state_name(r.remaining[i]) + "'");
                               }
                             });
      }
    }
    if (cfg.trace) res.trace.push_back({k, p.expand(next_lower), p.expand(before), p.expand(next_upper)});

    res.iterations = k;
    const double lower_move = max_diff(next_lower, lower);
    const double upper_move = max_diff(next_upper, upper);
    lower = std::move(next_lower);
    upper = std::move(next_upper);
    if (gap_of(lower, upper, wg.init()) <= cfg.epsilon) {
      res.termination = Termination::gap;
      break;
    }
    // With naive upper bounds a stable valuation proves nothing, so only the
    // gap and the cap end the run.
    const bool fix_stop = cfg.stop_at_fixpoint && !cfg.naive_upper;
    if (fix_stop && upper_move < cfg.lp_tol) {
      res.termination = Termination::upper_fix;
      break;
    }
    if (fix_stop && lower_move < cfg.lp_tol) {
      res.termination = Termination::lower_fix;
      break;
    }
    if (k >= cfg.max_iters) {
      res.termination = Termination::iter_cap;
      break;
    }
  }

  MixedStrategy safe = MixedStrategy::uniform(wg, Player::safe);
  for (StateId s = 0; s < n; ++s)
    if (!p.fixed[s]) safe.dist[s] = pre_opt(wg, upper, s, Player::reach).min_strategy;

  // A stalled bound may be the value or may just be converging slowly. The
  // extracted strategies settle it soundly: their exact values are bounds too.
  if (res.termination == Termination::upper_fix || res.termination == Termination::lower_fix) {
    const Valuation l = eval_reach_strategy(wg, reach);
    const Valuation w = eval_safe_strategy(wg, safe);
    for (StateId s = 0; s < n; ++s) {
      lower[s] = std::max(lower[s], l[s]);
      upper[s] = std::min(upper[s], 1.0 - w[s]);
    }
    const double gap = gap_of(lower, upper, wg.init());
    if (gap > cfg.epsilon) {
      std::ostringstream msg;
      msg << std::setprecision(3) << "bounds stopped moving with gap " << gap << " above epsilon";
      diagnostics.insert(msg.str());
    }
  }

  for (StateId s = 0; s < n; ++s) {
    if (lower[s] > upper[s]) {
      if (lower[s] - upper[s] > 10 * cfg.lp_tol)
        diagnostics.insert("bounds crossed at state '" + wg.state_name(s) + "'");
      lower[s] = upper[s];
    }
  }

  res.lower = p.expand(lower);
  res.upper = p.expand(upper);
  res.reach_strategy = p.expand(reach, g);
  res.safe_strategy = p.expand(safe, g);
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

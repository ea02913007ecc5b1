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

#include <doctest.h>

#include <cmath>
#include <random>

#include "csg/bvi.hpp"
#include "csg/error.hpp"
#include "csg/graph.hpp"
#include "csg/pre.hpp"
#include "support.hpp"

using namespace csg;
using doctest::Approx;
using test::fixture;
using test::sid;
using test::states;

TEST_CASE("config validation") {
  BviConfig c;
  c.epsilon = 0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = {};
  c.best_exit_tol = -1.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  CHECK_NOTHROW(BviConfig{}.validate());
}

TEST_CASE("running example converges to the limit values") {
  const Game g = fixture("running_example.json");
  BviConfig cfg;
  cfg.epsilon = 1e-6;
  const auto r = run_bvi(g, cfg);
  CHECK(r.termination == Termination::gap);
  CHECK(r.iterations < 100);
  const double expect[] = {std::sqrt(2.0) - 1, 0, 1, 0.4, 0.4, 0.4};
  for (StateId s = 0; s < 6; ++s) {
    CHECK(r.lower[s] <= r.upper[s]);
    CHECK(0.5 * (r.lower[s] + r.upper[s]) == Approx(expect[s]).epsilon(1e-5));
  }
  CHECK(r.winning == states(g, {"s1"}));
  REQUIRE(r.mecs.components.size() == 1);
  CHECK(r.mecs.components[0].states == states(g, {"s3", "s4"}));
  CHECK(r.diagnostics.empty());
}

TEST_CASE("running example trace") {
  const Game g = fixture("running_example.json");
  BviConfig cfg;
  cfg.trace = true;
  cfg.epsilon = 1e-8;
  cfg.max_iters = 3;
  const auto r = run_bvi(g, cfg);
  REQUIRE(r.trace.size() == 3);
  const auto& t1 = r.trace[0];
  const double before[] = {0.5, 0, 1, 1, 1, 0.4};
  const double after[] = {0.5, 0, 1, 0.4, 0.4, 0.4};
  const double low[] = {1.0 / 3, 0, 1, 0, 0, 0.4};
  for (StateId s = 0; s < 6; ++s) {
    CHECK(t1.upper_before_deflate[s] == Approx(before[s]).epsilon(kLpTol));
    CHECK(t1.upper[s] == Approx(after[s]).epsilon(kLpTol));
    CHECK(t1.lower[s] == Approx(low[s]).epsilon(kLpTol));
  }
  CHECK(r.trace[1].upper[0] == Approx(3.0 / 7).epsilon(1e-9));
  CHECK(r.trace[2].upper[0] == Approx(5.0 / 12).epsilon(1e-9));
  // Lower bound follows l <- (1 + l) / (3 + l) at s0.
  double l = 1.0 / 3;
  for (std::size_t k = 1; k < 3; ++k) {
    l = (1 + l) / (3 + l);
    CHECK(r.trace[k].lower[0] == Approx(l).epsilon(1e-9));
  }
  CHECK(r.termination == Termination::iter_cap);
}

TEST_CASE("deflate on the running example component") {
  const Game g = fixture("running_example.json");
  const Valuation u{0.5, 0, 1, 1, 1, 0.4};
  std::vector<StateSet> witnesses;
  const auto d = deflate(g, u, states(g, {"s3", "s4"}), 1e-9,
                         [&](const DeflateRound& r) { witnesses.push_back(r.exit.witnesses); });
  CHECK(d[3] == Approx(0.4));
  CHECK(d[4] == Approx(0.4));
  CHECK(d[0] == 0.5);
  // s4 leaves first, then s3 follows through it.
  REQUIRE(witnesses.size() == 2);
  CHECK(witnesses[0] == states(g, {"s4"}));
  CHECK(witnesses[1] == states(g, {"s3"}));
  CHECK_THROWS_AS(best_exit(g, u, states(g, {"s1"})), InternalError);
}

TEST_CASE("deflating {s5} iterates towards one half") {
  const Game g = fixture("slow_exit.json");
  const auto s5 = sid(g, "s5");
  Valuation v(g.num_states(), 0.0);
  v[sid(g, "s3")] = 1.0;
  v[s5] = 1.0;
  int steps = 0;
  while (v[s5] - 0.5 > 1e-6 && steps < 100) {
    const double before = v[s5];
    v = deflate(g, v, {s5});
    CHECK(v[s5] == Approx((before + 0.5) / 2).epsilon(1e-12));
    ++steps;
  }
  CHECK(v[s5] == Approx(0.5).epsilon(1e-6));
  CHECK(steps < 25);
}

TEST_CASE("stalling game: naive upper bound stalls, deflation fixes it") {
  const Game g = fixture("stalling_ec.json");
  BviConfig naive;
  naive.naive_upper = true;
  naive.max_iters = 50;
  const auto n = run_bvi(g, naive);
  CHECK(n.termination == Termination::iter_cap);
  CHECK(n.iterations == 50);
  CHECK(n.upper[sid(g, "s1")] == 1.0);
  CHECK(n.upper[sid(g, "s2")] == 1.0);

  const auto r = run_bvi(g, {});
  for (const char* s : {"s0", "s1", "s2"}) {
    CHECK(r.upper[sid(g, s)] == Approx(0.5).epsilon(1e-6));
    CHECK(r.lower[sid(g, s)] >= 0.5 - 1e-6);
  }
}

TEST_CASE("fixpoint termination leaves a Pre fixpoint behind") {
  const Game g = fixture("slow_exit.json");
  const auto r = run_bvi(g, {});
  REQUIRE(r.termination == Termination::upper_fix);
  for (StateId s = 0; s < g.num_states(); ++s)
    CHECK(pre_opt(g, r.upper, s, Player::reach).value == Approx(r.upper[s]).epsilon(1e-8));
}

TEST_CASE("collapsed and uncollapsed sinks agree") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Game g = test::random_game(seed, 10);
    BviConfig a, b;
    a.epsilon = b.epsilon = 1e-7;
    b.collapse_sinks = false;
    const auto ra = run_bvi(g, a), rb = run_bvi(g, b);
    for (StateId s = 0; s < g.num_states(); ++s) {
      CHECK(ra.lower[s] <= rb.upper[s] + 1e-7);
      CHECK(rb.lower[s] <= ra.upper[s] + 1e-7);
    }
  }
}

TEST_CASE("threads do not change the result") {
  const Game g = test::random_game(77, 20);
  BviConfig one, four;
  four.threads = 4;
  const auto a = run_bvi(g, one), b = run_bvi(g, four);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("EC-free games: naive iteration converges like deflated BVI") {
  // Acyclic apart from absorbing sinks: successors always have larger index.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Game base = test::random_game(seed, 9);
    GameDef d = base.to_def();
    const auto n = d.states.size();
    for (auto& t : d.transitions) {
      const auto from = *base.find_state(t.from);
      if (from == n - 1) {
        t.to = {{t.from, 1.0}};
        continue;
      }
      for (auto& [to, p] : t.to) {
        const auto j = *base.find_state(to);
        if (j <= from) to = d.states[from + 1 + (j % (n - 1 - from))];
      }
      std::map<std::string, double> merged;
      for (const auto& [to, p] : t.to) merged[to] += p;
      t.to.assign(merged.begin(), merged.end());
    }
    // The last state is the only cycle. Gap is taken over all states.
    d.init.reset();
    const Game g = Game::build(d);
    BviConfig naive;
    naive.naive_upper = true;
    naive.epsilon = 1e-6;
    const auto a = run_bvi(g, naive);
    const auto b = run_bvi(g, {});
    CHECK(a.termination == Termination::gap);
    for (StateId s = 0; s < g.num_states(); ++s) {
      const double ma = 0.5 * (a.lower[s] + a.upper[s]);
      const double mb = 0.5 * (b.lower[s] + b.upper[s]);
      CHECK(ma == Approx(mb).epsilon(2e-6));
    }
  }
}

TEST_CASE("stalling game: best exit of {s1,s2} leaves through s2") {
  const Game g = fixture("stalling_ec.json");
  Valuation v(g.num_states(), 0.5);
  v[sid(g, "s0")] = 1;
  v[sid(g, "s3")] = 1;
  v[sid(g, "s4")] = 0;
  const auto e = best_exit(g, v, states(g, {"s1", "s2"}));
  CHECK(e.value == Approx(1.0).epsilon(kLpTol));
  CHECK(e.witnesses == states(g, {"s2"}));
}

TEST_CASE("stalling game: the value is a fixpoint of the lower sweep") {
  const Game g = fixture("stalling_ec.json");
  const PreparedGame p = prepare(g, false);
  const double val[] = {0.5, 0.5, 0.5, 1, 0};
  Valuation v(p.game.num_states(), 0.0);
  for (StateId s = 0; s < g.num_states(); ++s) v[p.to_working[s]] = val[s];
  const auto next = lower_step(p, v);
  for (StateId s = 0; s < v.size(); ++s) CHECK(next[s] == Approx(v[s]).epsilon(kLpTol));
}

TEST_CASE("deflating any set of undecided states keeps U above the value") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Game g = test::random_game(seed, 7);
    const auto ref = reference_bounds(g, 1e-8, 1000);
    if (!ref.converged) continue;
    const auto fixed = set_union(g.target(), sure_winning(g));
    StateSet open;
    for (StateId s = 0; s < g.num_states(); ++s)
      if (!contains(fixed, s)) open.push_back(s);
    if (open.empty()) continue;
    for (int trial = 0; trial < 4; ++trial) {
      StateSet c;
      for (StateId s : open)
        if (rng() % 2) c.push_back(s);
      if (c.empty()) c.push_back(open[rng() % open.size()]);
      Valuation d;
      try {
        d = deflate(g, ref.upper, c);
      } catch (const InternalError&) {
        continue;  // no exit from c
      }
      ++checked;
      for (StateId s = 0; s < g.num_states(); ++s) CHECK(d[s] >= ref.lower[s] - 1e-7);
    }
  }
  CHECK(checked > 100);
}

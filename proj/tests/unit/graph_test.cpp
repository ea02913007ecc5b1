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

#include "csg/error.hpp"
#include "csg/graph.hpp"
#include "support.hpp"

using namespace csg;
using test::fixture;
using test::states;

namespace {

bool has_component(const MecDecomposition& d, const StateSet& s) {
  for (const auto& ec : d.components)
    if (ec.states == s) return true;
  return false;
}

}  // namespace

TEST_CASE("sure-winning regions") {
  const Game g2 = fixture("running_example.json");
  CHECK(sure_winning(g2) == states(g2, {"s1"}));
  const Game g3 = fixture("slow_exit.json");
  CHECK(sure_winning(g3) == states(g3, {"s1", "s2", "s4"}));
  const Game g4 = fixture("stalling_ec.json");
  CHECK(sure_winning(g4) == states(g4, {"s4"}));

  // Every state a target: nothing to defend.
  GameDef d = g2.to_def();
  d.target = d.states;
  CHECK(sure_winning(Game::build(d)).empty());
}

TEST_CASE("attractor inside a component") {
  const Game g = fixture("running_example.json");
  const StateSet c = states(g, {"s3", "s4"});
  CHECK(attractor(g, c, states(g, {"s4"})) == states(g, {"s4"}));
  const auto r = attractor_with_moves(g, c, {});
  CHECK(r.states.empty());
  CHECK_THROWS_AS(attractor(g, c, states(g, {"s0"})), UsageError);

  const Game g4 = fixture("stalling_ec.json");
  const StateSet c4 = states(g4, {"s0", "s1", "s2"});
  const auto a = attractor_with_moves(g4, c4, states(g4, {"s1"}));
  CHECK(a.states == states(g4, {"s1", "s2"}));
  REQUIRE(a.moves.size() == 1);
  CHECK(a.moves[0] == std::pair<StateId, MoveId>{test::sid(g4, "s2"), 0});
}

TEST_CASE("maximal end components") {
  const Game g2 = fixture("running_example.json");
  const auto m2 = mec_decompose(g2);
  CHECK(has_component(m2, states(g2, {"s3", "s4"})));
  CHECK(has_component(m2, states(g2, {"s1"})));
  CHECK(has_component(m2, states(g2, {"s2"})));
  CHECK(m2.components.size() == 3);
  const auto excl = mec_decompose(g2, states(g2, {"s1", "s2"}));
  REQUIRE(excl.components.size() == 1);
  CHECK(excl.components[0].states == states(g2, {"s3", "s4"}));

  const Game g3 = fixture("slow_exit.json");
  const auto m3 = mec_decompose(g3);
  CHECK(has_component(m3, states(g3, {"s5"})));
  for (const auto& ec : m3.components) {
    if (ec.states != states(g3, {"s5"})) continue;
    CHECK(ec.stay_pairs[0] == std::vector<MovePair>{{0, 0}, {1, 1}});
  }
  // The reconstruction of s1 keeps {s1, s2} closed under (a, c).
  CHECK(has_component(m3, states(g3, {"s1", "s2"})));

  const Game g4 = fixture("stalling_ec.json");
  const auto m4 = mec_decompose(g4);
  CHECK(has_component(m4, states(g4, {"s0", "s1", "s2"})));
  for (const auto& ec : m4.components) CHECK(check_end_component(g4, ec).empty());
}

TEST_CASE("{s1,s2} in the stalling game is an end component but not maximal") {
  const Game g = fixture("stalling_ec.json");
  const StateSet c = states(g, {"s1", "s2"});
  EndComponent ec{c, {}};
  const auto mask = to_mask(c, g.num_states());
  for (StateId s : c) ec.stay_pairs.push_back(stay_pairs(g, s, mask));
  CHECK(check_end_component(g, ec).empty());
}

TEST_CASE("random games: MECs are well formed and disjoint") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Game g = test::random_game(seed, 12);
    const auto d = mec_decompose(g);
    std::vector<int> seen(g.num_states(), 0);
    for (const auto& ec : d.components) {
      CHECK(check_end_component(g, ec).empty());
      for (StateId s : ec.states) ++seen[s];
    }
    for (int c : seen) CHECK(c <= 1);
    // Every state with a self-closing pair lies in some component.
    for (StateId s = 0; s < g.num_states(); ++s) {
      std::vector<char> self(g.num_states(), 0);
      self[s] = 1;
      if (!stay_pairs(g, s, self).empty()) CHECK(seen[s] == 1);
    }
  }
}

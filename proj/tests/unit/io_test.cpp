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

#include "csg/bvi.hpp"
#include "csg/error.hpp"
#include "csg/io.hpp"
#include "support.hpp"

using namespace csg;
using doctest::Approx;

TEST_CASE("probabilities as numbers and fractions") {
  CHECK(parse_probability(Json(0.25)) == 0.25);
  CHECK(parse_probability(Json(1)) == 1.0);
  CHECK(parse_probability(Json("1/2")) == 0.5);
  CHECK(parse_probability(Json("2/5")) == 0.4);
  CHECK(parse_probability(Json("1")) == 1.0);
  CHECK_THROWS_AS(parse_probability(Json("1/0")), ValidationError);
  CHECK_THROWS_AS(parse_probability(Json("half")), ValidationError);
  CHECK_THROWS_AS(parse_probability(Json("1/2/3")), ValidationError);
  CHECK_THROWS_AS(parse_probability(Json::array()), ValidationError);
}

TEST_CASE("game files round-trip") {
  for (const char* f : {"running_example.json", "slow_exit.json", "stalling_ec.json"}) {
    const GameDef a = load_game_def(test::fixture_path(f));
    const GameDef b = game_def_from_json(Json::parse(game_def_to_json(a).dump()));
    CHECK(a == b);
    CHECK(game_def_from_json(game_def_to_json(b)) == b);
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomGameSpec spec;
    spec.seed = seed;
    const GameDef a = gen_random_game(spec);
    CHECK(game_def_from_json(Json::parse(game_def_to_json(a).dump())) == a);
  }
}

TEST_CASE("structural errors") {
  Json j = read_json_file(test::fixture_path("running_example.json"));
  SUBCASE("duplicate transition") {
    j["transitions"].push_back(j["transitions"][0]);
    CHECK_THROWS_AS(game_def_from_json(j), ValidationError);
  }
  SUBCASE("unknown keys only matter when strict") {
    j["comment"] = "hello";
    CHECK_NOTHROW(game_def_from_json(j));
    CHECK_THROWS_AS(game_def_from_json(j, true), ValidationError);
    j.erase("comment");
    j["transitions"][0]["note"] = 1;
    CHECK_THROWS_AS(game_def_from_json(j, true), ValidationError);
  }
  SUBCASE("missing key") {
    j.erase("target");
    CHECK_THROWS_AS(game_def_from_json(j), ValidationError);
  }
  SUBCASE("wrong type") {
    j["states"] = "s0";
    CHECK_THROWS_AS(game_def_from_json(j), ValidationError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(read_json_file("/nonexistent/game.json"), ValidationError); }
}

TEST_CASE("strategy files") {
  const Game g = test::fixture("running_example.json");
  const Json j = Json::parse(R"({"s0": {"a": "1/3", "b": "2/3"}, "s4": {"d": 1}})");
  const auto st = strategy_from_json(g, Player::reach, j);
  CHECK(st.dist[0][0] == Approx(1.0 / 3));
  CHECK(st.dist[4] == std::vector<double>{0.0, 1.0});
  CHECK(st.dist[2] == std::vector<double>{1.0});
  CHECK(strategy_from_json(g, Player::reach, strategy_to_json(g, st)) == st);
  CHECK_THROWS_AS(strategy_from_json(g, Player::reach, Json::parse(R"({"s0": {"c": 1}})")), UsageError);
  CHECK_THROWS_AS(strategy_from_json(g, Player::reach, Json::parse(R"({"s9": {"a": 1}})")), UsageError);
  CHECK_THROWS_AS(strategy_from_json(g, Player::reach, Json::parse(R"({"s0": {"a": 0.2}})")), UsageError);
}

TEST_CASE("reports") {
  const Game g = test::fixture("running_example.json");
  const auto r = run_bvi(g, {});
  const Json rep = make_report(g, r, {"bvi", Objective::reach, 1e-6, Json::object()});
  for (const char* key : {"tool", "version", "method", "objective", "epsilon", "config", "iterations",
                          "termination", "states", "strategies", "mecs", "winningRegion"})
    CHECK(rep.contains(key));
  CHECK(rep["termination"] == "gap");
  CHECK(rep["winningRegion"] == Json::parse(R"(["s1"])"));
  CHECK(rep["mecs"] == Json::parse(R"([["s3","s4"]])"));
  // The report's strategies can be read back.
  const auto sigma = strategy_from_json(g, Player::reach, rep);
  CHECK(sigma == r.reach_strategy);

  const Json safety = make_report(g, r, {"bvi", Objective::safety, 1e-6, Json::object()});
  CHECK(safety["states"]["s0"]["lower"].get<double>() == 1.0 - r.upper[0]);
  CHECK(safety["states"]["s0"]["upper"].get<double>() == 1.0 - r.lower[0]);
  // Doubles survive a text round trip exactly.
  const Json back = Json::parse(rep.dump());
  CHECK(back["states"]["s0"]["lower"].get<double>() == r.lower[0]);
}

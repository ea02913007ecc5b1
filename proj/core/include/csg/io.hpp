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

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "csg/bvi.hpp"
#include "csg/game.hpp"

namespace csg {

using Json = nlohmann::ordered_json;

// A probability given as a JSON number or as a "p/q" (or "p") string.
double parse_probability(const Json& j);

// Game file <-> GameDef. Structural problems raise ValidationError; unknown
// keys are an error only when strict.
GameDef game_def_from_json(const Json& j, bool strict = false);
Json game_def_to_json(const GameDef& def);

Json read_json_file(const std::filesystem::path& path);
GameDef load_game_def(const std::filesystem::path& path, bool strict = false);
Game load_game(const std::filesystem::path& path, bool strict = false);

// Strategy as {state: {move: probability}}. States that are not listed get the
// uniform distribution. Accepts a full report too (its "strategies" entry).
MixedStrategy strategy_from_json(const Game& g, Player owner, const Json& j);
Json strategy_to_json(const Game& g, const MixedStrategy& st);

Json valuation_to_json(const Game& g, const Valuation& v);
Json state_set_to_json(const Game& g, const StateSet& set);

enum class Objective { reach, safety };

struct ReportInfo {
  std::string method;
  Objective objective = Objective::reach;
  double epsilon = 0.0;
  Json config = Json::object();
};

// Solve report. For the safety objective the bounds are complemented.
Json make_report(const Game& g, const BoundsResult& r, const ReportInfo& info);

}  // namespace csg

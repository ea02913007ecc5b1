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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "csg/game.hpp"
#include "csg/io.hpp"
#include "csg/oracle.hpp"

namespace csg::test {

inline std::string fixture_path(const std::string& name) { return std::string(CSG_FIXTURE_DIR) + "/" + name; }

inline Game fixture(const std::string& name) { return load_game(fixture_path(name)); }

inline StateId sid(const Game& g, const std::string& name) { return *g.find_state(name); }

inline StateSet states(const Game& g, std::initializer_list<const char*> names) {
  StateSet out;
  for (const char* n : names) out.push_back(sid(g, n));
  std::sort(out.begin(), out.end());
  return out;
}

// Small random game for property suites; sizes stay tiny so a thousand cases run fast.
inline Game random_game(std::uint64_t seed, std::size_t max_states = 8, std::size_t moves = 3,
                        double ec_bias = 0.4) {
  RandomGameSpec spec;
  spec.seed = seed;
  spec.state_count = 2 + seed % (max_states - 1);
  spec.max_moves_per_player = moves;
  spec.branching = 3;
  spec.target_fraction = 0.2;
  spec.ec_bias = ec_bias;
  return Game::build(gen_random_game(spec));
}

inline double max_abs_diff(const Valuation& a, const Valuation& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace csg::test

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

#include <string>
#include <utility>
#include <vector>

#include "csg/game.hpp"

namespace csg {

using MovePair = std::pair<MoveId, MoveId>;

// State set closed under its stay pairs and strongly connected through them.
struct EndComponent {
  StateSet states;
  std::vector<std::vector<MovePair>> stay_pairs;  // parallel to states
};

struct MecDecomposition {
  std::vector<EndComponent> components;  // sorted by smallest state
};

// States where safe can keep the play outside the target surely (reach value 0).
StateSet sure_winning(const Game& g);

// States of C from which reach surely reaches B while staying in C.
StateSet attractor(const Game& g, const StateSet& c, const StateSet& b);

// As attractor, plus for every added state the first move that forces progress.
struct AttractorResult {
  StateSet states;
  std::vector<std::pair<StateId, MoveId>> moves;  // only for states outside B
};
AttractorResult attractor_with_moves(const Game& g, const StateSet& c, const StateSet& b);

// Move pairs (a,b) at s with Dest(s,a,b) ⊆ set.
std::vector<MovePair> stay_pairs(const Game& g, StateId s, const std::vector<char>& set_mask);

// Maximal end components over pair-wise stay relations. States in `excluded`
// are never part of a component.
MecDecomposition mec_decompose(const Game& g, const StateSet& excluded = {});

// Violations of the EndComponent invariants (empty when well formed).
std::vector<std::string> check_end_component(const Game& g, const EndComponent& ec);

}  // namespace csg

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

#include <optional>
#include <utility>

#include "csg/bvi.hpp"
#include "csg/game.hpp"
#include "csg/graph.hpp"

namespace csg {

enum class EvalMode { exact, iterative };

struct SiConfig {
  double epsilon = 1e-6;
  std::size_t max_iters = 10'000;
  double improve_tol = 1e-9;
  double best_exit_tol = 1e-9;
  EvalMode eval_mode = EvalMode::exact;
  std::optional<MixedStrategy> seed_reach;
  std::optional<MixedStrategy> seed_safe;
  bool trace = false;
  bool collapse_sinks = true;
  unsigned threads = 1;

  void validate() const;
};

// Value of a fixed strategy together with the opponent's (pure) best response.
struct StrategyEvaluation {
  Valuation values;
  MixedStrategy response;
};

// val_σ(◇T): safe minimizes the reachability probability against σ.
// `tol` is the stopping tolerance of the iterative mode.
StrategyEvaluation evaluate_reach_strategy(const Game& g, const MixedStrategy& sigma,
                                           EvalMode mode = EvalMode::exact, double tol = 1e-10);
Valuation eval_reach_strategy(const Game& g, const MixedStrategy& sigma,
                              EvalMode mode = EvalMode::exact, double tol = 1e-10);

// Safety value of τ: one minus the best reachability probability reach
// achieves against τ. In iterative mode the tolerance is charged against it.
StrategyEvaluation evaluate_safe_strategy(const Game& g, const MixedStrategy& tau,
                                          EvalMode mode = EvalMode::exact, double tol = 1e-10);
Valuation eval_safe_strategy(const Game& g, const MixedStrategy& tau,
                             EvalMode mode = EvalMode::exact, double tol = 1e-10);

struct ImprovementSets {
  StateSet lower;  // reach can improve L locally
  StateSet upper;  // safe can improve 1-U locally
};

ImprovementSets improvement_sets(const PreparedGame& p, const Valuation& lower,
                                 const Valuation& upper, double improve_tol = 1e-9);

// DEFLATE on the upper bound that also rewrites the safe strategy inside c to
// the best response against reach's best exit.
std::pair<Valuation, MixedStrategy> deflate_si(const Game& g, MixedStrategy tau, Valuation upper,
                                               const StateSet& c, double tol = 1e-9);

// Safety-side counterpart: raises the safety valuation w inside c to one minus
// the best exit reach can force, computed directly on w.
Valuation inflate(const Game& g, Valuation w, const StateSet& c, double tol = 1e-9);

BoundsResult run_bsi(const Game& g, const SiConfig& cfg = {});

}  // namespace csg

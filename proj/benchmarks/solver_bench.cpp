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

#include <cstdint>
#include <random>

#include "benchmark/benchmark.h"
#include "csg/bsi.hpp"
#include "csg/bvi.hpp"
#include "csg/matrix_game.hpp"
#include "csg/oracle.hpp"

namespace {

using namespace csg;

Game make_game(std::size_t states, std::size_t moves, std::uint64_t seed) {
  RandomGameSpec spec;
  spec.seed = seed;
  spec.state_count = states;
  spec.max_moves_per_player = moves;
  spec.branching = 3;
  spec.target_fraction = 0.1;
  spec.ec_bias = 0.2;
  return Game::build(gen_random_game(spec));
}

void BM_SolveMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PayoffMatrix m(n, n);
  for (double& e : m.entries) e = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_matrix(m));
}
BENCHMARK(BM_SolveMatrix)->Arg(2)->Arg(3)->Arg(5)->Arg(8);

void BM_Bvi(benchmark::State& state) {
  const Game g = make_game(static_cast<std::size_t>(state.range(0)), 3, 1);
  BviConfig cfg;
  cfg.epsilon = 1e-6;
  cfg.max_iters = 2000;
  std::size_t iters = 0;
  for (auto _ : state) {
    const auto r = run_bvi(g, cfg);
    iters = r.iterations;
    benchmark::DoNotOptimize(r.lower.data());
  }
  state.counters["sweeps"] = static_cast<double>(iters);
}
BENCHMARK(BM_Bvi)->Arg(10)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Bsi(benchmark::State& state) {
  const Game g = make_game(static_cast<std::size_t>(state.range(0)), 3, 1);
  SiConfig cfg;
  cfg.epsilon = 1e-6;
  cfg.max_iters = 500;
  std::size_t iters = 0;
  for (auto _ : state) {
    const auto r = run_bsi(g, cfg);
    iters = r.iterations;
    benchmark::DoNotOptimize(r.lower.data());
  }
  state.counters["rounds"] = static_cast<double>(iters);
}
BENCHMARK(BM_Bsi)->Arg(10)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_EvalReachStrategy(benchmark::State& state) {
  const Game g = make_game(static_cast<std::size_t>(state.range(0)), 3, 2);
  const auto sigma = MixedStrategy::uniform(g, Player::reach);
  for (auto _ : state) benchmark::DoNotOptimize(eval_reach_strategy(g, sigma));
}
BENCHMARK(BM_EvalReachStrategy)->Arg(10)->Arg(100)->Arg(300)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

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

// csgbound: command-line front end for the concurrent game solvers.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "csg/bsi.hpp"
#include "csg/bvi.hpp"
#include "csg/error.hpp"
#include "csg/graph.hpp"
#include "csg/io.hpp"
#include "csg/oracle.hpp"
#include "csg/version.hpp"

namespace {

using csg::Json;

enum Exit { kOk = 0, kInput = 1, kInternal = 2, kIterCap = 3 };

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw csg::UsageError("cannot write '" + out + "'");
  f << text;
}

struct SolveArgs {
  std::string file;
  std::string method = "bvi";
  std::string objective = "reach";
  double epsilon = 1e-6;
  std::optional<std::size_t> max_iters;
  bool naive_upper = false;
  bool trace = false;
  bool strict = false;
  unsigned threads = 1;
  std::string out;
};

int cmd_solve(const SolveArgs& a) {
  const csg::Game g = csg::load_game(a.file, a.strict);
  csg::BoundsResult r;
  Json config;
  if (a.method == "bvi") {
    csg::BviConfig cfg;
    cfg.epsilon = a.epsilon;
    if (a.max_iters) cfg.max_iters = *a.max_iters;
    cfg.naive_upper = a.naive_upper;
    cfg.trace = a.trace;
    cfg.threads = a.threads;
    r = csg::run_bvi(g, cfg);
    config = {{"maxIters", cfg.max_iters}, {"naiveUpper", cfg.naive_upper}, {"lpTol", cfg.lp_tol},
              {"bestExitTol", cfg.best_exit_tol}, {"threads", cfg.threads}};
  } else {
    if (a.naive_upper) throw csg::UsageError("--naive-upper applies to --method bvi only");
    csg::SiConfig cfg;
    cfg.epsilon = a.epsilon;
    if (a.max_iters) cfg.max_iters = *a.max_iters;
    cfg.trace = a.trace;
    cfg.threads = a.threads;
    r = csg::run_bsi(g, cfg);
    config = {{"maxIters", cfg.max_iters}, {"improveTol", cfg.improve_tol},
              {"bestExitTol", cfg.best_exit_tol}, {"threads", cfg.threads}};
  }
  config["file"] = a.file;
  config["trace"] = a.trace;
  csg::ReportInfo info{a.method, a.objective == "safety" ? csg::Objective::safety : csg::Objective::reach,
                       a.epsilon, config};
  emit(csg::make_report(g, r, info), a.out);
  for (const auto& d : r.diagnostics) std::cerr << "warning: " << d << "\n";
  return r.termination == csg::Termination::iter_cap ? kIterCap : kOk;
}

int cmd_analyze(const std::string& file, bool strict, const std::string& out) {
  const csg::Game g = csg::load_game(file, strict);
  const auto mecs = csg::mec_decompose(g);
  Json j;
  Json list = Json::array();
  Json pairs = Json::object();
  for (const auto& ec : mecs.components) {
    list.push_back(csg::state_set_to_json(g, ec.states));
    for (std::size_t i = 0; i < ec.states.size(); ++i) {
      const auto s = ec.states[i];
      Json ps = Json::array();
      for (const auto& [m1, m2] : ec.stay_pairs[i])
        ps.push_back({g.move_names(csg::Player::reach, s)[m1], g.move_names(csg::Player::safe, s)[m2]});
      pairs[g.state_name(s)] = std::move(ps);
    }
  }
  j["mecs"] = std::move(list);
  j["winningRegion"] = csg::state_set_to_json(g, csg::sure_winning(g));
  j["stayPairs"] = std::move(pairs);
  emit(j, out);
  return kOk;
}

struct EvalArgs {
  std::string file;
  std::string reach;
  std::string safe;
  std::size_t samples = 0;
  std::size_t horizon = csg::kDefaultHorizon;
  std::uint64_t seed = 0;
  std::string from;
  bool strict = false;
  unsigned threads = 1;
  std::string out;
};

int cmd_evaluate(const EvalArgs& a) {
  const csg::Game g = csg::load_game(a.file, a.strict);
  if (a.reach.empty() && a.safe.empty()) throw csg::UsageError("evaluate needs --reach and/or --safe");
  std::optional<csg::MixedStrategy> sigma, tau;
  if (!a.reach.empty()) sigma = csg::strategy_from_json(g, csg::Player::reach, csg::read_json_file(a.reach));
  if (!a.safe.empty()) tau = csg::strategy_from_json(g, csg::Player::safe, csg::read_json_file(a.safe));

  Json j;
  // A missing side is filled with the opponent's best response.
  if (!tau) {
    auto ev = csg::evaluate_reach_strategy(g, *sigma);
    tau = std::move(ev.response);
    j["bestResponse"] = {{"safe", csg::strategy_to_json(g, *tau)}};
  } else if (!sigma) {
    auto ev = csg::evaluate_safe_strategy(g, *tau);
    sigma = std::move(ev.response);
    j["bestResponse"] = {{"reach", csg::strategy_to_json(g, *sigma)}};
  }
  const auto chain = csg::induced_chain(g, *sigma, *tau);
  j["exact"] = csg::valuation_to_json(g, csg::chain_reach(chain));
  if (a.samples > 0) {
    csg::StateSet starts;
    if (!a.from.empty()) {
      const auto s = g.find_state(a.from);
      if (!s) throw csg::UsageError("unknown state '" + a.from + "'");
      starts = {*s};
    } else {
      for (csg::StateId s = 0; s < g.num_states(); ++s) starts.push_back(s);
    }
    Json mc = Json::object();
    for (auto s : starts) {
      const auto est = csg::monte_carlo(chain, s, a.samples, a.horizon, a.seed, a.threads);
      mc[g.state_name(s)] = {{"estimate", est.estimate}, {"halfWidth", est.half_width},
                             {"samples", est.samples}, {"truncated", est.truncated}};
    }
    j["monteCarlo"] = std::move(mc);
    j["seed"] = a.seed;
  }
  emit(j, a.out);
  return kOk;
}

struct GenArgs {
  csg::RandomGameSpec spec;
  std::string trivial;
};

int cmd_gen(GenArgs a) {
  if (a.trivial == "reach") a.spec.trivial_player = csg::Player::reach;
  else if (a.trivial == "safe") a.spec.trivial_player = csg::Player::safe;
  const auto def = csg::gen_random_game(a.spec);
  std::cout << csg::game_def_to_json(def).dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified bounds for concurrent stochastic reachability games", "csgbound"};
  app.set_version_flag("--version", std::string(csg::kVersion));
  app.require_subcommand(1);

  SolveArgs solve;
  auto* sc = app.add_subcommand("solve", "Compute value bounds and strategies");
  sc->add_option("game", solve.file, "Game file (JSON)")->required();
  sc->add_option("--method", solve.method, "bvi or bsi")->check(CLI::IsMember({"bvi", "bsi"}))->capture_default_str();
  sc->add_option("--epsilon", solve.epsilon, "Target gap")->check(CLI::PositiveNumber)->capture_default_str();
  sc->add_option("--max-iters", solve.max_iters, "Iteration cap (default 1e6 for bvi, 1e4 for bsi)");
  sc->add_flag("--naive-upper", solve.naive_upper, "Skip deflation of the upper bound");
  sc->add_flag("--trace", solve.trace, "Emit per-iteration valuations");
  sc->add_option("--objective", solve.objective, "reach or safety")
      ->check(CLI::IsMember({"reach", "safety"}))->capture_default_str();
  sc->add_option("--threads", solve.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sc->add_flag("--strict", solve.strict, "Reject unknown keys in the game file");
  sc->add_option("--out", solve.out, "Output file (default stdout)");

  std::string analyze_file, analyze_out;
  bool analyze_strict = false;
  auto* ac = app.add_subcommand("analyze", "Report MECs, sure-winning region and stay pairs");
  ac->add_option("game", analyze_file, "Game file (JSON)")->required();
  ac->add_flag("--strict", analyze_strict, "Reject unknown keys in the game file");
  ac->add_option("--out", analyze_out, "Output file (default stdout)");

  EvalArgs eval;
  auto* ec = app.add_subcommand("evaluate", "Evaluate fixed strategies exactly and by simulation");
  ec->add_option("game", eval.file, "Game file (JSON)")->required();
  ec->add_option("--reach", eval.reach, "Reach strategy file (or solve report)");
  ec->add_option("--safe", eval.safe, "Safe strategy file (or solve report)");
  ec->add_option("--samples", eval.samples, "Monte Carlo samples per state (0 = off)");
  ec->add_option("--horizon", eval.horizon, "Step cap per simulated run")->capture_default_str();
  ec->add_option("--seed", eval.seed, "Simulation seed")->capture_default_str();
  ec->add_option("--from", eval.from, "Simulate from this state only");
  ec->add_option("--threads", eval.threads, "Worker threads")->check(CLI::PositiveNumber);
  ec->add_flag("--strict", eval.strict, "Reject unknown keys in the game file");
  ec->add_option("--out", eval.out, "Output file (default stdout)");

  GenArgs gen;
  auto* gc = app.add_subcommand("gen", "Generate a random game");
  gc->add_option("--states", gen.spec.state_count, "Number of states")->check(CLI::PositiveNumber)->capture_default_str();
  gc->add_option("--moves", gen.spec.max_moves_per_player, "Max moves per player")->check(CLI::PositiveNumber)->capture_default_str();
  gc->add_option("--branching", gen.spec.branching, "Max successors per move pair")->check(CLI::PositiveNumber)->capture_default_str();
  gc->add_option("--target-frac", gen.spec.target_fraction, "Fraction of target states")->capture_default_str();
  gc->add_option("--ec-bias", gen.spec.ec_bias, "Chance of injecting a two-state cycle")->capture_default_str();
  gc->add_option("--seed", gen.spec.seed, "Generator seed")->capture_default_str();
  gc->add_option("--trivial", gen.trivial, "Give this player a single move everywhere")
      ->check(CLI::IsMember({"reach", "safe"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*sc) return cmd_solve(solve);
    if (*ac) return cmd_analyze(analyze_file, analyze_strict, analyze_out);
    if (*ec) return cmd_evaluate(eval);
    return cmd_gen(gen);
  } catch (const csg::ValidationError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << d << "\n";
    return kInput;
  } catch (const csg::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

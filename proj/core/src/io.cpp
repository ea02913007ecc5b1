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

#include "csg/io.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include "csg/error.hpp"
#include "csg/version.hpp"

namespace csg {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError({msg}); }

std::uint64_t parse_uint(std::string_view s, const std::string& whole) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    fail("malformed probability '" + whole + "'");
  return x;
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing key '" + key + "'");
  return *it;
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> string_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(as_string(e, where));
  return out;
}

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) fail(where + ": unknown key '" + k + "'");
  }
}

}  // namespace

double parse_probability(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) fail("probability must be a number or a \"p/q\" string");
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  if (slash == std::string::npos) return static_cast<double>(parse_uint(s, s));
  const auto p = parse_uint(std::string_view(s).substr(0, slash), s);
  const auto q = parse_uint(std::string_view(s).substr(slash + 1), s);
  if (q == 0) fail("zero denominator in '" + s + "'");
  return static_cast<double>(p) / static_cast<double>(q);
}

GameDef game_def_from_json(const Json& j, bool strict) {
  if (!j.is_object()) fail("game file must be a JSON object");
  if (strict) check_keys(j, {"states", "moves1", "moves2", "transitions", "target", "init"}, "game");
  GameDef def;
  def.states = string_array(field(j, "states", "game"), "states");
  for (const char* key : {"moves1", "moves2"}) {
    const auto& m = field(j, key, "game");
    if (!m.is_object()) fail(std::string(key) + ": expected an object");
    auto& dst = std::string(key) == "moves1" ? def.moves1 : def.moves2;
    for (const auto& [s, moves] : m.items()) dst[s] = string_array(moves, std::string(key) + "." + s);
  }
  const auto& ts = field(j, "transitions", "game");
  if (!ts.is_array()) fail("transitions: expected an array");
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& t = ts[i];
    const std::string where = "transitions[" + std::to_string(i) + "]";
    if (!t.is_object()) fail(where + ": expected an object");
    if (strict) check_keys(t, {"from", "m1", "m2", "to"}, where);
    TransitionDef tr{as_string(field(t, "from", where), where), as_string(field(t, "m1", where), where),
                     as_string(field(t, "m2", where), where), {}};
    if (!seen.emplace(tr.from, tr.m1, tr.m2).second)
      fail(where + ": duplicate transition (" + tr.from + ", " + tr.m1 + ", " + tr.m2 + ")");
    const auto& to = field(t, "to", where);
    if (!to.is_object()) fail(where + ".to: expected an object");
    for (const auto& [s, p] : to.items()) tr.to.emplace_back(s, parse_probability(p));
    def.transitions.push_back(std::move(tr));
  }
  def.target = string_array(field(j, "target", "game"), "target");
  if (const auto it = j.find("init"); it != j.end()) def.init = as_string(*it, "init");
  return def;
}

Json game_def_to_json(const GameDef& def) {
  Json j;
  j["states"] = def.states;
  for (const char* key : {"moves1", "moves2"}) {
    const auto& src = std::string(key) == "moves1" ? def.moves1 : def.moves2;
    Json m = Json::object();
    for (const auto& s : def.states)
      if (const auto it = src.find(s); it != src.end()) m[s] = it->second;
    for (const auto& [s, moves] : src)
      if (!m.contains(s)) m[s] = moves;
    j[key] = std::move(m);
  }
  Json ts = Json::array();
  for (const auto& t : def.transitions) {
    Json to = Json::object();
    for (const auto& [s, p] : t.to) to[s] = p;
    ts.push_back({{"from", t.from}, {"m1", t.m1}, {"m2", t.m2}, {"to", std::move(to)}});
  }
  j["transitions"] = std::move(ts);
  j["target"] = def.target;
  if (def.init) j["init"] = *def.init;
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(path.string() + ": " + e.what());
  }
}

GameDef load_game_def(const std::filesystem::path& path, bool strict) {
  return game_def_from_json(read_json_file(path), strict);
}

Game load_game(const std::filesystem::path& path, bool strict) { return Game::build(load_game_def(path, strict)); }

MixedStrategy strategy_from_json(const Game& g, Player owner, const Json& j) {
  if (j.is_object() && j.contains("strategies")) return strategy_from_json(g, owner, j["strategies"][to_string(owner)]);
  if (!j.is_object()) throw UsageError("strategy must be an object state -> {move: probability}");
  MixedStrategy st = MixedStrategy::uniform(g, owner);
  for (const auto& [name, dist] : j.items()) {
    const auto s = g.find_state(name);
    if (!s) throw UsageError("strategy names unknown state '" + name + "'");
    if (!dist.is_object()) throw UsageError("strategy at '" + name + "' must be an object");
    std::vector<double> p(g.num_moves(owner, *s), 0.0);
    double sum = 0.0;
    for (const auto& [move, prob] : dist.items()) {
      const auto m = g.find_move(owner, *s, move);
      if (!m) throw UsageError("move '" + move + "' is not available to " + to_string(owner) + " at '" + name + "'");
      const double x = parse_probability(prob);
      if (x < 0.0) throw UsageError("negative probability at '" + name + "'");
      p[*m] = x;
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw UsageError("strategy at '" + name + "' sums to " + std::to_string(sum));
    st.dist[*s] = clean_distribution(std::move(p));
  }
  check_strategy(g, st);
  return st;
}

Json strategy_to_json(const Game& g, const MixedStrategy& st) {
  Json j = Json::object();
  for (StateId s = 0; s < g.num_states(); ++s) {
    Json d = Json::object();
    const auto& names = g.move_names(st.owner, s);
    for (MoveId m = 0; m < names.size(); ++m)
      if (st.dist[s][m] > 0.0) d[names[m]] = st.dist[s][m];
    j[g.state_name(s)] = std::move(d);
  }
  return j;
}

Json valuation_to_json(const Game& g, const Valuation& v) {
  Json j = Json::object();
  for (StateId s = 0; s < g.num_states(); ++s) j[g.state_name(s)] = v[s];
  return j;
}

Json state_set_to_json(const Game& g, const StateSet& set) {
  Json j = Json::array();
  for (StateId s : set) j.push_back(g.state_name(s));
  return j;
}

Json make_report(const Game& g, const BoundsResult& r, const ReportInfo& info) {
  const bool safety = info.objective == Objective::safety;
  auto complement = [](Valuation v) {
    for (auto& x : v) x = 1.0 - x;
    return v;
  };
  const Valuation lo = safety ? complement(r.upper) : r.lower;
  const Valuation hi = safety ? complement(r.lower) : r.upper;

  Json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["method"] = info.method;
  j["objective"] = safety ? "safety" : "reach";
  j["epsilon"] = info.epsilon;
  j["config"] = info.config;
  j["iterations"] = r.iterations;
  j["termination"] = to_string(r.termination);
  Json states = Json::object();
  for (StateId s = 0; s < g.num_states(); ++s) states[g.state_name(s)] = {{"lower", lo[s]}, {"upper", hi[s]}};
  j["states"] = std::move(states);
  j["strategies"] = {{"reach", strategy_to_json(g, r.reach_strategy)}, {"safe", strategy_to_json(g, r.safe_strategy)}};
  Json mecs = Json::array();
  for (const auto& ec : r.mecs.components) mecs.push_back(state_set_to_json(g, ec.states));
  j["mecs"] = std::move(mecs);
  j["winningRegion"] = state_set_to_json(g, r.winning);
  j["diagnostics"] = r.diagnostics;
  if (!r.trace.empty()) {
    Json trace = Json::array();
    for (const auto& snap : r.trace) {
      Json e{{"iteration", snap.iteration}};
      if (safety) {
        e["lower"] = valuation_to_json(g, complement(snap.upper));
        e["lowerBeforeInflate"] = valuation_to_json(g, complement(snap.upper_before_deflate));
        e["upper"] = valuation_to_json(g, complement(snap.lower));
      } else {
        e["lower"] = valuation_to_json(g, snap.lower);
        e["upperBeforeDeflate"] = valuation_to_json(g, snap.upper_before_deflate);
        e["upper"] = valuation_to_json(g, snap.upper);
      }
      trace.push_back(std::move(e));
    }
    j["trace"] = std::move(trace);
  }
  return j;
}

}  // namespace csg

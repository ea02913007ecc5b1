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

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "csg/io.hpp"
#include "support.hpp"

using csg::Json;
using doctest::Approx;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CSG_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fx(const char* name) { return csg::test::fixture_path(name); }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("csgbound_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("solve the running example") {
  const auto r = run("solve " + fx("running_example.json") + " --epsilon 0.01");
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  const double lo = j["states"]["s0"]["lower"], hi = j["states"]["s0"]["upper"];
  CHECK(hi - lo <= 0.01);
  CHECK(lo >= 0.404);
  CHECK(hi <= 0.425);
  CHECK(j["method"] == "bvi");
  for (const auto& [s, b] : j["states"].items()) CHECK(b["lower"].get<double>() <= b["upper"].get<double>());
}

TEST_CASE("naive upper bound hits the cap on the stalling game") {
  const auto r = run("solve " + fx("stalling_ec.json") + " --naive-upper --max-iters 50");
  CHECK(r.code == 3);
  const Json j = Json::parse(r.out);
  CHECK(j["termination"] == "iterCap");
  CHECK(j["states"]["s1"]["upper"].get<double>() == 1.0);
}

TEST_CASE("safety objective reports complemented values") {
  const auto r = run("solve " + fx("running_example.json") + " --objective safety");
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["objective"] == "safety");
  const double mid = 0.5 * (j["states"]["s0"]["lower"].get<double>() + j["states"]["s0"]["upper"].get<double>());
  CHECK(mid == Approx(2.0 - std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("bvi and bsi reports agree") {
  for (const char* f : {"running_example.json", "slow_exit.json", "stalling_ec.json"}) {
    const Json a = Json::parse(run("solve " + fx(f) + " --epsilon 1e-4").out);
    const Json b = Json::parse(run("solve " + fx(f) + " --epsilon 1e-4 --method bsi").out);
    for (const auto& [s, x] : a["states"].items()) {
      const auto& y = b["states"][s];
      CHECK(std::abs(x["lower"].get<double>() - y["lower"].get<double>()) <= 2e-4);
      CHECK(std::abs(x["upper"].get<double>() - y["upper"].get<double>()) <= 2e-4);
    }
  }
}

TEST_CASE("analyze") {
  const Json j2 = Json::parse(run("analyze " + fx("running_example.json")).out);
  CHECK(j2["winningRegion"] == Json::parse(R"(["s1"])"));
  bool found = false;
  for (const auto& m : j2["mecs"]) found = found || m == Json::parse(R"(["s3","s4"])");
  CHECK(found);
  CHECK(j2.contains("stayPairs"));
  const Json j3 = Json::parse(run("analyze " + fx("slow_exit.json")).out);
  found = false;
  for (const auto& m : j3["mecs"]) found = found || m == Json::parse(R"(["s5"])");
  CHECK(found);
  // With every state a target there is nothing to defend.
  Json all = csg::read_json_file(fx("running_example.json"));
  all["target"] = all["states"];
  const Json j = Json::parse(run("analyze " + temp_file("all_target.json", all.dump())).out);
  CHECK(j["winningRegion"] == Json::array());
}

TEST_CASE("evaluate") {
  const std::string uniform = temp_file("uniform.json", R"({"s0": {"a": 0.5, "b": 0.5}})");
  const std::string uniform_safe =
      temp_file("uniform_safe.json", R"({"s0": {"c": 0.5, "d": 0.5}, "s3": {"a": 0.5, "b": 0.5}})");
  auto r = run("evaluate " + fx("running_example.json") + " --reach " + uniform);
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["exact"]["s0"].get<double>() == Approx(1.0 / 3).epsilon(1e-12));
  CHECK(j.contains("bestResponse"));

  const std::string staying = temp_file("staying.json", R"({"s4": {"c": 1}})");
  const std::string staying_safe = temp_file("staying_safe.json", R"({"s3": {"a": 1}})");
  j = Json::parse(run("evaluate " + fx("running_example.json") + " --reach " + staying + " --safe " + staying_safe).out);
  CHECK(j["exact"]["s3"].get<double>() == 0.0);

  r = run("evaluate " + fx("running_example.json") + " --reach " + uniform + " --safe " + uniform_safe +
          " --samples 20000 --seed 3 --from s0");
  REQUIRE(r.code == 0);
  j = Json::parse(r.out);
  const double exact = j["exact"]["s0"];
  const double est = j["monteCarlo"]["s0"]["estimate"], hw = j["monteCarlo"]["s0"]["halfWidth"];
  CHECK(std::abs(est - exact) <= 2 * hw);
  CHECK(j["monteCarlo"]["s0"]["truncated"] == 0);

  const std::string bad = temp_file("bad.json", R"({"s0": {"z": 1}})");
  CHECK(run("evaluate " + fx("running_example.json") + " --reach " + bad).code == 1);
}

TEST_CASE("gen") {
  const auto a = run("gen --seed 7 --states 20");
  const auto b = run("gen --seed 7 --states 20");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run("gen --seed 8 --states 20").out != a.out);
  const std::string path = temp_file("gen_mdp.json", run("gen --moves 1 --seed 3").out);
  CHECK(run("solve " + path).code == 0);
  CHECK(run("gen --states 0").code == 1);
  CHECK(run("gen --target-frac 1.5").code == 1);
}

TEST_CASE("ec bias produces end components") {
  int with_mec = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const std::string path =
        temp_file("ec.json", run("gen --states 50 --ec-bias 0.5 --seed " + std::to_string(seed)).out);
    const Json j = Json::parse(run("analyze " + path).out);
    bool nontrivial = false;
    for (const auto& m : j["mecs"]) nontrivial = nontrivial || m.size() > 1;
    with_mec += nontrivial;
  }
  CHECK(with_mec >= 50);
}

TEST_CASE("errors map to exit codes") {
  CHECK(run("solve /nonexistent.json").code == 1);
  const std::string broken = temp_file("broken.json", "{\"states\": [");
  CHECK(run("solve " + broken).code == 1);
  Json j = csg::read_json_file(fx("running_example.json"));
  j["transitions"][0]["to"] = Json::parse(R"({"s1": 0.9})");
  CHECK(run("solve " + temp_file("sum.json", j.dump())).code == 1);
  j = csg::read_json_file(fx("running_example.json"));
  j["extra"] = true;
  const std::string extra = temp_file("extra.json", j.dump());
  CHECK(run("solve " + extra).code == 0);
  CHECK(run("solve " + extra + " --strict").code == 1);
  CHECK(run("solve " + fx("running_example.json") + " --method bsi --naive-upper").code == 1);
  CHECK(run("solve " + fx("running_example.json") + " --epsilon -1").code == 1);
  CHECK(run("frobnicate").code == 1);
}

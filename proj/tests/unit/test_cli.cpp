// Copyright 2026 The nlo_quanta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "nloq/error.hpp"
#include "nloq_tools/commands.hpp"
#include "nloq_tools/config.hpp"
#include "nloq_tools/output.hpp"

using namespace nloq::tools;

namespace {

ScenarioResult run(const std::string& cmd, const std::string& ini, int threads = 1) {
  return run_command(cmd, Config::parse(ini), RunContext{threads, false});
}

std::string all_csv(const ScenarioResult& r) {
  std::string s;
  for (const Table& t : r.tables) s += t.to_csv(r.command, "h");
  return s;
}

}  // namespace

TEST_CASE("config parsing") {
  const Config c = Config::parse("; comment\n[squeeze]\n  Np =  100, 200 \nu_max=1.5\n[run]\nseed=3\n");
  CHECK(c.sections() == std::set<std::string>{"squeeze", "run"});
  CHECK(c.get_list("squeeze", "Np", {}) == std::vector<double>{100.0, 200.0});
  CHECK(c.get_double("squeeze", "u_max", 0.0) == 1.5);
  CHECK(c.get_int("run", "seed", 0) == 3);
  CHECK(c.get_double("squeeze", "absent", 7.0) == 7.0);
  CHECK(c.canonical() == "run.seed=3\nsqueeze.Np=100, 200\nsqueeze.u_max=1.5\n");
  CHECK(Config::parse("").empty());

  CHECK_THROWS_AS(Config::parse("[a]\nx = 1\n[a]\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[a\nx=1\n"), ConfigError);
  const Config bad = Config::parse("[s]\nx = 1.5.2\ny = nan\nz = 2.5\nb = maybe\n");
  CHECK_THROWS_AS(bad.get_double("s", "x", 0.0), ConfigError);
  CHECK_THROWS_AS(bad.get_double("s", "y", 0.0), ConfigError);
  CHECK_THROWS_AS(bad.get_int("s", "z", 0), ConfigError);
  CHECK_THROWS_AS(bad.get_bool("s", "b", false), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/nloq.ini"), UsageError);
}

TEST_CASE("config hash") {
  const Config a = Config::parse("[kerr]\nalpha = 2\ndim=50\n");
  const Config b = Config::parse("[kerr]\ndim = 50\n\n  alpha=2  \n");
  CHECK(config_hash("kerr", a) == config_hash("kerr", b));
  CHECK(config_hash("kerr", a) != config_hash("squeeze", a));
  CHECK(config_hash("kerr", a) != config_hash("kerr", Config::parse("[kerr]\nalpha = 2.0\ndim=50\n")));
  CHECK(config_hash("kerr", a).size() == 64);
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("strict keys and sections") {
  CHECK_THROWS_AS(run("kerr", "[kerr]\nalpah = 2\n"), ConfigError);
  CHECK_THROWS_AS(run("kerr", "[kerr]\nalpha = 2\n[extra]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(run("kerr", "[squeeze]\nNp = 100\n"), ConfigError);
  CHECK_THROWS_AS(run("squeeze", "[squeeze]\nNp = -5\n"), ConfigError);
  CHECK_THROWS_AS(run("kerr", "[kerr]\nalpha = 2\n[run]\nseed = -1\n"), ConfigError);
  CHECK_THROWS_AS(run("soliton", "[soliton]\nn0 = 2\nalpha = 20\n"), ConfigError);
  CHECK_THROWS_AS(run("nosuch", ""), UsageError);
  CHECK(is_command("validate"));
  CHECK_FALSE(is_command("nosuch"));
  CHECK(command_names().size() == 10);
}

TEST_CASE("thread resolution") {
  CHECK(resolve_threads(3) == 3);
  ::setenv("NLO_QUANTA_THREADS", "5", 1);
  CHECK(resolve_threads(0) == 5);
  CHECK(resolve_threads(2) == 2);
  ::setenv("NLO_QUANTA_THREADS", "many", 1);
  CHECK_THROWS_AS(resolve_threads(0), UsageError);
  ::unsetenv("NLO_QUANTA_THREADS");
  CHECK(resolve_threads(0) == 1);
}

TEST_CASE("deterministic tables") {
  const std::string ini = "[oscillator]\nkappa = 0.5\ngamma_b = 10\nratio_points = 9\n";
  const std::string one = all_csv(run("oscillator", ini, 1));
  CHECK(one == all_csv(run("oscillator", ini, 3)));
  CHECK(one == all_csv(run("oscillator", ini + "[run]\nseed = 7\n", 2)));
  const std::string disp = "[dispersion]\nbeta_nu = 5.0196e10\nbeta_nu_prime = 2.0915e-6\n"
                           "beta_nu_dblprime = 6.9716e-22\nk_points = 17\n";
  CHECK(all_csv(run("dispersion", disp, 1)) == all_csv(run("dispersion", disp, 4)));
}

TEST_CASE("command results") {
  const ScenarioResult sq = run("squeeze", "[squeeze]\nNp = 10000\nu_points = 5\n");
  CHECK(sq.summary["var_min"]["10000"].get<double>() == doctest::Approx(1.25e-3));

  const ScenarioResult osc = run("oscillator", "[oscillator]\nratio_points = 5\n");
  CHECK(osc.summary["squeezing_limit_at_threshold"].get<double>() == doctest::Approx(0.125));

  const ScenarioResult ent = run("entangle", "[entangle]\npoints = 181\n");
  CHECK(ent.summary["minimum"].get<double>() ==
        doctest::Approx(4.0 - 2.0 * std::numbers::sqrt2).epsilon(1e-6));

  const ScenarioResult dc = run("downconv", "[downconv]\npoints = 11\n");
  CHECK(std::abs(dc.summary["decay_exponent"].get<double>() - 2.0) < 0.1);

  const ScenarioResult kerr = run("kerr", "[kerr]\nsamples = 10\n");
  CHECK(kerr.summary["max_abs_error"].get<double>() < 1e-10);

  const ScenarioResult sol = run("soliton", "[soliton]\nn0 = 2\nsamples = 3\n");
  CHECK(sol.summary["norm_drift"].get<double>() < 1e-10);
  CHECK(sol.summary["shape_deviation"].get<double>() < 1e-3);

  const ScenarioResult med = run("medium", "[medium]\ndelta = 1e9\ng = 1e4\n");
  CHECK(med.summary["chi1"].get<double>() < 0.0);

  const ScenarioResult fast = run("validate", "[validate]\nfast = true\n");
  CHECK(fast.passed);
}

TEST_CASE("written outputs") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "nloq_cli_test_out";
  fs::remove_all(dir);
  const ScenarioResult r = run("kerr", "[kerr]\nsamples = 4\n");
  OutputMeta meta;
  meta.config_hash = "deadbeef";
  meta.threads = 2;
  const auto files = write_outputs(r, dir.string(), meta);
  REQUIRE(files.size() == r.tables.size() + 1);
  std::ifstream csv(files.front());
  std::string first, second;
  std::getline(csv, first);
  std::getline(csv, second);
  CHECK(first.rfind("# nloq kerr ", 0) == 0);
  std::string line;
  bool saw_hash = false;
  while (std::getline(csv, line))
    if (line == "# config_sha256=deadbeef") saw_hash = true;
  CHECK(saw_hash);
  std::ifstream js(files.back());
  const nlohmann::json report = nlohmann::json::parse(js);
  CHECK(report["command"] == "kerr");
  CHECK(report["threads"] == 2);
  CHECK(report["tables"].size() == r.tables.size());
  fs::remove_all(dir);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
    const std::string s = format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(NAN) == "nan");
  Table t("x", {{"a", "1"}, {"b", "1"}});
  CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
  t.add_row({2.0, std::string("p,q")});
  t.add_row({1.0, 3LL});
  t.sort_by(0);
  const std::string csv = t.to_csv("cmd", "h");
  CHECK(csv.find("1,3\n2,\"p,q\"\n") != std::string::npos);
}

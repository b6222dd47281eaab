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

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nloq/error.hpp"
#include "nloq_tools/commands.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kNumeric = 3 };

int exit_code_for(const nloq::Error& e) {
  switch (e.code()) {
    case nloq::Errc::numeric:
    case nloq::Errc::ambiguity:
      return kNumeric;
    default:
      return kValidation;
  }
}

void print_matrix(const nloq::tools::ScenarioResult& r) {
  for (const auto& t : r.tables) {
    if (t.name() != "matrix") continue;
    std::cout << "id,name,status\n";
    for (const auto& row : t.rows())
      std::cout << std::get<long long>(row[0]) << "," << std::get<std::string>(row[1]) << ","
                << std::get<std::string>(row[2]) << "\n";
  }
  std::cout << "overall," << (r.passed ? "PASS" : "FAIL") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nloq::tools;
  CLI::App app{"nloq: scenario runner for quantum nonlinear optics"};
  std::string command, config_path, out_dir = "nloq_out";
  int threads_flag = 0;
  bool fast = false;
  app.add_option("command", command, "One of: squeeze entangle kerr oscillator nphoton "
                                     "medium dispersion downconv soliton validate")
      ->required();
  app.add_option("--config", config_path, "Scenario config (INI)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", threads_flag, "Worker threads (default: NLO_QUANTA_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--fast", fast, "validate: skip the heavy checks");
  app.set_version_flag("--version", version_string());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (!is_command(command)) throw UsageError("unknown command '" + command + "'");
    Config config;
    if (!config_path.empty()) {
      config = Config::load(config_path);
      if (config.empty()) throw UsageError("config '" + config_path + "' is empty");
    } else if (command != "validate") {
      throw UsageError("command '" + command + "' needs --config");
    }

    RunContext ctx;
    ctx.threads = resolve_threads(threads_flag);
    ctx.fast = fast;

    const auto start = std::chrono::steady_clock::now();
    const ScenarioResult result = run_command(command, config, ctx);
    OutputMeta meta;
    meta.config_hash = config_hash(command, config);
    meta.config_echo = nlohmann::json::object();
    for (const auto& [k, v] : config.entries())
      meta.config_echo[k.first.empty() ? k.second : k.first + "." + k.second] = v;
    meta.threads = ctx.threads;
    meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const std::string& path : write_outputs(result, out_dir, meta))
      std::cerr << "wrote " << path << "\n";

    if (command == "validate") print_matrix(result);
    return result.passed ? kOk : kNumeric;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kValidation;
  } catch (const nloq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kNumeric;
  }
}

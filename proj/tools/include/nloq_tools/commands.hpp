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

#pragma once

#include <string>
#include <vector>

#include "nloq_tools/config.hpp"
#include "nloq_tools/output.hpp"

namespace nloq::tools {

struct RunContext {
  int threads = 1;
  bool fast = false;
};

const std::vector<std::string>& command_names();
bool is_command(const std::string& name);

// Reads the command's section plus [run], rejects unknown keys, validates
// every parameter, then computes. Parameter problems surface as ConfigError
// or nloq::Error before any heavy work starts.
ScenarioResult run_command(const std::string& command, const Config& config,
                           const RunContext& ctx);

// Resolves the worker count: explicit flag, then NLO_QUANTA_THREADS, then 1.
int resolve_threads(int flag_value);

}  // namespace nloq::tools

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

#include <functional>
#include <string>
#include <vector>

namespace nloq::tools {

// One compared quantity inside a check.
struct Measure {
  std::string label;
  double value = 0.0;
  double reference = 0.0;
  double error = 0.0;      // the quantity compared against tolerance
  double tolerance = 0.0;
  bool passed = false;
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool skipped = false;
  double seconds = 0.0;
  double time_budget = 0.0;  // seconds
  std::vector<Measure> measures;
  std::string detail;        // failure message or notes
};

struct ValidationOptions {
  bool fast = false;  // skip the checks marked heavy
  int threads = 1;
  // Called as each check finishes; calls are serialized.
  std::function<void(const CheckResult&)> on_result;
};

int validation_check_count();  // 11
bool validation_check_heavy(int id);

// Runs a single check (1-based id). Exceptions become failed results.
CheckResult run_check(int id);

// Runs all checks; results are ordered by id regardless of thread count.
std::vector<CheckResult> run_validation(const ValidationOptions& opts);

}  // namespace nloq::tools

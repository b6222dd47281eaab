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
#include <variant>
#include <vector>

#include "json.hpp"

namespace nloq::tools {

using Cell = std::variant<double, long long, std::string>;

struct Column {
  std::string name;
  std::string unit;  // "1" for dimensionless
};

class Table {
 public:
  Table(std::string name, std::vector<Column> columns);

  const std::string& name() const { return name_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  void add_row(std::vector<Cell> row);
  // Stable sort of rows by the given numeric column.
  void sort_by(std::size_t column);
  // Deterministic CSV with a comment preamble carrying the config hash.
  std::string to_csv(const std::string& command, const std::string& config_hash) const;

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct ScenarioResult {
  std::string command;
  std::vector<std::string> modules;  // library modules the command used
  std::vector<Table> tables;
  nlohmann::json summary = nlohmann::json::object();
  bool passed = true;  // false makes the runner exit with the numeric code
};

// Shortest decimal that round-trips the value.
std::string format_number(double v);

struct OutputMeta {
  std::string config_hash;
  nlohmann::json config_echo;
  int threads = 1;
  double wall_seconds = 0.0;
};

// Writes <dir>/<command>_<table>.csv for every table and
// <dir>/<command>_report.json; returns the paths written.
std::vector<std::string> write_outputs(const ScenarioResult& result,
                                       const std::string& dir, const OutputMeta& meta);

// Library version string.
std::string version_string();

}  // namespace nloq::tools

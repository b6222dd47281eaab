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

#include "nloq_tools/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nloq::tools {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_number(*d);
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return csv_escape(std::get<std::string>(c));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string version_string() { return NLOQ_VERSION; }

Table::Table(std::string name, std::vector<Column> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw std::logic_error("table '" + name_ + "': row has " + std::to_string(row.size()) +
                           " cells for " + std::to_string(columns_.size()) + " columns");
  rows_.push_back(std::move(row));
}

void Table::sort_by(std::size_t column) {
  std::stable_sort(rows_.begin(), rows_.end(), [column](const auto& a, const auto& b) {
    return std::get<double>(a[column]) < std::get<double>(b[column]);
  });
}

std::string Table::to_csv(const std::string& command, const std::string& config_hash) const {
  std::string out = "# nloq " + command + " " + name_ + "\n";
  out += "# version=" + version_string() + "\n";
  out += "# config_sha256=" + config_hash + "\n";
  out += "# units:";
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out += (i ? "," : "") + csv_escape(columns_[i].unit);
  out += "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out += (i ? "," : "") + csv_escape(columns_[i].name);
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  return out;
}

std::vector<std::string> write_outputs(const ScenarioResult& result, const std::string& dir,
                                       const OutputMeta& meta) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());

  std::vector<std::string> written;
  nlohmann::json tables = nlohmann::json::array();
  for (const Table& t : result.tables) {
    const fs::path path = fs::path(dir) / (result.command + "_" + t.name() + ".csv");
    std::ofstream f(path, std::ios::binary);
    f << t.to_csv(result.command, meta.config_hash);
    if (!f) throw std::runtime_error("failed writing " + path.string());
    written.push_back(path.string());
    nlohmann::json cols = nlohmann::json::array();
    for (const Column& c : t.columns()) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    tables.push_back({{"name", t.name()},
                      {"file", path.filename().string()},
                      {"rows", t.rows().size()},
                      {"columns", cols}});
  }

  nlohmann::json report = {
      {"command", result.command},
      {"version", version_string()},
      {"config_sha256", meta.config_hash},
      {"config", meta.config_echo},
      {"modules", result.modules},
      {"threads", meta.threads},
      {"wall_time_s", meta.wall_seconds},
      {"passed", result.passed},
      {"tables", tables},
      {"summary", result.summary},
  };
  const fs::path path = fs::path(dir) / (result.command + "_report.json");
  std::ofstream f(path, std::ios::binary);
  f << report.dump(2) << "\n";
  if (!f) throw std::runtime_error("failed writing " + path.string());
  written.push_back(path.string());
  return written;
}

}  // namespace nloq::tools

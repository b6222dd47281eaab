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

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nloq::tools {

// Bad invocation: unknown command, missing or empty config. Exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config that parses but is malformed or fails validation. Exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat INI scenario config. Keys are addressed as (section, key); keys
// before the first section header live in section "". Every typed read
// marks the key as used, and check_all_used() rejects the leftovers.
class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text, const std::string& origin = "<string>");

  bool empty() const { return values_.empty(); }
  bool has(const std::string& section, const std::string& key) const;
  std::set<std::string> sections() const;

  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;

  // Throws ConfigError naming every key that no reader asked for.
  void check_all_used() const;
  // Throws ConfigError for sections outside `allowed`.
  void restrict_sections(const std::set<std::string>& allowed) const;

  // "section.key=value" lines, sorted, whitespace-trimmed.
  std::string canonical() const;
  const std::map<std::pair<std::string, std::string>, std::string>& entries() const {
    return values_;
  }

 private:
  std::optional<std::string> raw(const std::string& section, const std::string& key) const;

  std::string origin_;
  std::map<std::pair<std::string, std::string>, std::string> values_;
  mutable std::set<std::pair<std::string, std::string>> used_;
};

// Lower-case hex SHA-256 of `text`.
std::string sha256_hex(const std::string& text);

// Hash identifying a scenario: command name plus the canonical config.
std::string config_hash(const std::string& command, const Config& config);

}  // namespace nloq::tools

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

#include "nloq_tools/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

namespace nloq::tools {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string where(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

double parse_double(const std::string& text, const std::string& name) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError("'" + name + "' must be a finite number, got '" + t + "'");
  return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream os;
    os << origin << ":" << e.line() << ": " << e.message();
    throw ConfigError(os.str());
  }
  Config c;
  c.origin_ = origin;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      c.values_[{"", trim(name)}] = trim(node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty())
        throw ConfigError(origin + ": nested key '" + key + "' is not supported");
      c.values_[{trim(name), trim(key)}] = trim(leaf.data());
    }
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
  return values_.count({section, key}) > 0;
}

std::set<std::string> Config::sections() const {
  std::set<std::string> out;
  for (const auto& [k, v] : values_) out.insert(k.first);
  return out;
}

std::optional<std::string> Config::raw(const std::string& section,
                                       const std::string& key) const {
  const auto it = values_.find({section, key});
  if (it == values_.end()) return std::nullopt;
  used_.insert({section, key});
  return it->second;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  const auto v = raw(section, key);
  return v ? parse_double(*v, where(section, key)) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
  const auto v = raw(section, key);
  if (!v) return fallback;
  int out = 0;
  const std::string t = trim(*v);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("'" + where(section, key) + "' must be an integer, got '" + t + "'");
  return out;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  const auto v = raw(section, key);
  if (!v) return fallback;
  const std::string t = lower(trim(*v));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("'" + where(section, key) + "' must be a boolean, got '" + t + "'");
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const auto v = raw(section, key);
  return v ? *v : fallback;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  const auto v = raw(section, key);
  if (!v) return fallback;
  std::vector<double> out;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(item, where(section, key)));
  }
  return out;
}

void Config::check_all_used() const {
  std::vector<std::string> unknown;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) unknown.push_back(where(k.first, k.second));
  if (unknown.empty()) return;
  std::string msg = origin_ + ": unknown key";
  msg += unknown.size() > 1 ? "s " : " ";
  for (std::size_t i = 0; i < unknown.size(); ++i)
    msg += (i ? ", '" : "'") + unknown[i] + "'";
  throw ConfigError(msg);
}

void Config::restrict_sections(const std::set<std::string>& allowed) const {
  for (const std::string& s : sections())
    if (!allowed.count(s))
      throw ConfigError(origin_ + ": unknown section '[" + s + "]'");
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += where(k.first, k.second) + "=" + v + "\n";
  return out;
}

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

std::string config_hash(const std::string& command, const Config& config) {
  return sha256_hex("command=" + command + "\n" + config.canonical());
}

}  // namespace nloq::tools

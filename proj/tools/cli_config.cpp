// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli_config.hpp"

#include <cstdlib>
#include <set>

namespace vmh::cli {

namespace {

std::string_view strip(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
}

std::string interpolate(std::string_view value, const EnvLookup& env) {
  std::string out;
  for (std::size_t i = 0; i < value.size();) {
    if (value.compare(i, 2, "${") != 0) {
      out += value[i++];
      continue;
    }
    const auto close = value.find('}', i + 2);
    if (close == std::string_view::npos) throw ConfigError("unterminated ${ in config value");
    const std::string name(value.substr(i + 2, close - i - 2));
    if (name.empty()) throw ConfigError("empty variable name in config value");
    auto v = env(name);
    if (!v) throw ConfigError("environment variable " + name + " is not defined");
    out += *v;
    i = close + 1;
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_config(std::string_view text, const EnvLookup& env) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    const auto line = strip(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = strip(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    try {
      out.emplace_back(std::string(key), interpolate(strip(line.substr(eq + 1)), env));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::vector<std::pair<std::string, std::string>>& entries) {
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) != 0) continue;
    given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::vector<std::string> out = args;
  for (const auto& [k, v] : entries) {
    if (given.contains(k)) continue;
    out.push_back("--" + k + "=" + v);
  }
  return out;
}

}  // namespace vmh::cli

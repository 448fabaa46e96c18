// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vmh::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Looks up an environment variable; nullopt when undefined.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup process_env();

/// Replaces every ${NAME}. Throws ConfigError for undefined or unterminated references.
std::string interpolate(std::string_view value, const EnvLookup& env);

/// "key = value" lines; '#' starts a comment line; repeated keys accumulate in order.
std::vector<std::pair<std::string, std::string>> parse_config(std::string_view text, const EnvLookup& env);

/// Appends "--key=value" for every config entry whose key is not already present
/// among the command-line flags. Command-line flags win.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace vmh::cli

// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>

#include "vmh/error.hpp"

namespace vmh {

struct HttpOptions {
  std::chrono::milliseconds timeout{30000};
  int retries = 2;           // extra attempts after the first
  std::string bearer_token;  // empty: no Authorization header
};

/// POSTs a JSON body and returns the response body. Transport errors and
/// 5xx responses are retried; exhausting the budget or any other non-2xx
/// status throws Error(failure).
std::string post_json(const std::string& url, const std::string& body, const HttpOptions& opts, ErrorCode failure);

/// Value of the named environment variable, or empty.
std::string env_or_empty(const std::string& name);

}  // namespace vmh

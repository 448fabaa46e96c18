// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace vmh::resources {

/// Bundled text file by name ("lexicon", "stopwords", or a prompt template
/// id such as "positive_rewrite.v1"). Empty when unknown.
std::string_view get(std::string_view name);

}  // namespace vmh::resources

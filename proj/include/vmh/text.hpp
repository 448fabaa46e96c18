// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace vmh {

/// Unicode NFC. Throws Error(FormatError) on invalid UTF-8.
std::string nfc(std::string_view utf8);

std::string_view trim(std::string_view s);

/// 64-bit FNV-1a (offset 0xcbf29ce484222325, prime 0x100000001b3).
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t v);

/// Content hash used as a cache and cassette key for sentence texts.
inline std::string text_hash(std::string_view text) { return hex64(fnv1a64(text)); }

std::string read_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace vmh

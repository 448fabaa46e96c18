// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vmh {

/// Seed for a reproducible draw sequence. The engine is std::mt19937_64
/// (fully specified by the standard) and doubles are built from the top 53
/// bits of each output, so sequences are identical across platforms.
struct RngState {
  static constexpr std::string_view kAlgorithm = "mt19937_64/top53";
  std::uint64_t seed = 0;

  /// Per-item stream: seed XOR index.
  RngState split(std::uint64_t index) const noexcept { return {seed ^ index}; }
};

class Rng {
 public:
  explicit Rng(RngState state) : engine_(state.seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vmh

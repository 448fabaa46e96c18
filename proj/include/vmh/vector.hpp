// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vmh {

/// Fixed-dimension vector of finite reals.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  /// Throws InvalidArgument on NaN/Inf or an empty component list.
  explicit EmbeddingVector(std::vector<double> components);

  std::size_t dimension() const noexcept { return components_.size(); }
  std::span<const double> components() const noexcept { return components_; }
  double operator[](std::size_t i) const { return components_[i]; }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<double> components_;
};

/// Unit L2 norm, same direction. Throws ZeroVector.
EmbeddingVector normalize(const EmbeddingVector& v);

}  // namespace vmh

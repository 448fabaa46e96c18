// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "vmh/vector.hpp"

namespace vmh {

/// Cosine, Euclidean, Mahalanobis, Bray-Curtis, Lance-Williams, Pearson, Manhattan.
enum class MetricId { CD, ED, MD, BD, LD, PD, MhD };

inline constexpr std::array<MetricId, 7> kAllMetrics = {MetricId::CD, MetricId::ED, MetricId::MD, MetricId::BD,
                                                        MetricId::LD, MetricId::PD, MetricId::MhD};

std::string_view to_string(MetricId m);
/// Accepts the short marks ("CD", "MhD", ...), case-insensitive. Throws InvalidArgument.
MetricId parse_metric(std::string_view s);

/// Regularized inverse covariance for MD. `inverse` is row-major d x d.
struct CovarianceModel {
  std::vector<double> mean;
  std::vector<double> inverse;
  std::size_t dimension = 0;
  double epsilon = 0.0;
  std::size_t samples = 0;

  double vi(std::size_t i, std::size_t j) const { return inverse[i * dimension + j]; }
  static CovarianceModel identity(std::size_t d);
};

/// Throws DimensionMismatch, DegenerateInput, MissingCovariance.
/// Bitwise-equal inputs give exactly 0 unless the metric is undefined for them.
double distance(std::span<const double> u, std::span<const double> v, MetricId m,
                const CovarianceModel* cov = nullptr);
double distance(const EmbeddingVector& u, const EmbeddingVector& v, MetricId m, const CovarianceModel* cov = nullptr);

/// Sample covariance (n-1) plus eps*I, eps = eps_scale * trace/d (eps_scale itself when the trace is 0),
/// inverted through a Cholesky factorization. Throws TooFewSamples, DimensionMismatch,
/// SingularAfterRegularization.
CovarianceModel fit_covariance(const std::vector<EmbeddingVector>& vectors, double eps_scale = 1e-6);

/// (x-min)/(max-min); all zeros for a constant list. Throws EmptyInput.
std::vector<double> minmax_normalize(std::span<const double> xs);

}  // namespace vmh

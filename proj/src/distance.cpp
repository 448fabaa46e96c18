// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmh/distance.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "vmh/error.hpp"

namespace vmh {

std::string_view to_string(MetricId m) {
  switch (m) {
    case MetricId::CD: return "CD";
    case MetricId::ED: return "ED";
    case MetricId::MD: return "MD";
    case MetricId::BD: return "BD";
    case MetricId::LD: return "LD";
    case MetricId::PD: return "PD";
    case MetricId::MhD: return "MhD";
  }
  return "?";
}

MetricId parse_metric(std::string_view s) {
  std::string up;
  for (char c : s) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (MetricId m : kAllMetrics) {
    std::string name(to_string(m));
    for (auto& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (name == up) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown metric " + std::string(s));
}

CovarianceModel CovarianceModel::identity(std::size_t d) {
  CovarianceModel c;
  c.dimension = d;
  c.mean.assign(d, 0.0);
  c.inverse.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) c.inverse[i * d + i] = 1.0;
  return c;
}

namespace {

double cosine(std::span<const double> u, std::span<const double> v) {
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw Error(ErrorCode::DegenerateInput, "cosine distance of a zero vector");
  return 1.0 - dot / (std::sqrt(uu) * std::sqrt(vv));
}

double euclidean(std::span<const double> u, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double manhattan(std::span<const double> u, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::abs(u[i] - v[i]);
  return acc;
}

double bray_curtis(std::span<const double> u, std::span<const double> v) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num += std::abs(u[i] - v[i]);
    den += std::abs(u[i] + v[i]);
  }
  if (den == 0.0) throw Error(ErrorCode::DegenerateInput, "Bray-Curtis denominator is zero");
  return num / den;
}

double lance_williams(std::span<const double> u, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double den = std::abs(u[i]) + std::abs(v[i]);
    if (den != 0.0) acc += std::abs(u[i] - v[i]) / den;
  }
  return acc;
}

bool is_constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double a) { return a == x[0]; });
}

double pearson(std::span<const double> u, std::span<const double> v) {
  if (is_constant(u) || is_constant(v)) throw Error(ErrorCode::DegenerateInput, "Pearson distance of a constant vector");
  const double n = static_cast<double>(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double cov = 0.0, su = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i] - mu, b = v[i] - mv;
    cov += a * b;
    su += a * a;
    sv += b * b;
  }
  if (su == 0.0 || sv == 0.0) throw Error(ErrorCode::DegenerateInput, "Pearson distance of a constant vector");
  return 1.0 - cov / (std::sqrt(su) * std::sqrt(sv));
}

// Summation order matches euclidean() so that VI = I reproduces ED bit for bit.
double mahalanobis(std::span<const double> u, std::span<const double> v, const CovarianceModel& cov) {
  const std::size_t d = u.size();
  std::vector<double> diff(d);
  for (std::size_t i = 0; i < d; ++i) diff[i] = u[i] - v[i];
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double w = 0.0;
    const double* row = cov.inverse.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) w += row[j] * diff[j];
    acc += diff[i] * w;
  }
  return std::sqrt(std::max(acc, 0.0));
}

}  // namespace

double distance(std::span<const double> u, std::span<const double> v, MetricId m, const CovarianceModel* cov) {
  if (u.size() != v.size())
    throw Error(ErrorCode::DimensionMismatch,
                "dimensions differ: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  if (u.empty()) throw Error(ErrorCode::DimensionMismatch, "empty vectors");
  if (m == MetricId::MD) {
    if (cov == nullptr) throw Error(ErrorCode::MissingCovariance, "MD needs a fitted covariance model");
    if (cov->dimension != u.size())
      throw Error(ErrorCode::DimensionMismatch, "covariance dimension " + std::to_string(cov->dimension) +
                                                    " vs vector dimension " + std::to_string(u.size()));
  }
  const bool same = std::memcmp(u.data(), v.data(), u.size() * sizeof(double)) == 0;
  double r = 0.0;
  switch (m) {
    case MetricId::CD: r = cosine(u, v); break;
    case MetricId::ED: r = euclidean(u, v); break;
    case MetricId::MD: r = mahalanobis(u, v, *cov); break;
    case MetricId::BD: r = bray_curtis(u, v); break;
    case MetricId::LD: r = lance_williams(u, v); break;
    case MetricId::PD: r = pearson(u, v); break;
    case MetricId::MhD: r = manhattan(u, v); break;
  }
  if (same) return 0.0;
  return std::max(r, 0.0);
}

double distance(const EmbeddingVector& u, const EmbeddingVector& v, MetricId m, const CovarianceModel* cov) {
  return distance(u.components(), v.components(), m, cov);
}

CovarianceModel fit_covariance(const std::vector<EmbeddingVector>& vectors, double eps_scale) {
  if (vectors.size() < 2)
    throw Error(ErrorCode::TooFewSamples, "covariance needs at least 2 vectors, got " + std::to_string(vectors.size()));
  if (!(eps_scale > 0.0) || !std::isfinite(eps_scale))
    throw Error(ErrorCode::InvalidArgument, "eps_scale must be positive");
  const std::size_t d = vectors.front().dimension();
  const std::size_t n = vectors.size();
  Eigen::MatrixXd x(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    if (vectors[r].dimension() != d) throw Error(ErrorCode::DimensionMismatch, "vectors differ in dimension");
    for (std::size_t c = 0; c < d; ++c) x(r, c) = vectors[r][c];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  Eigen::MatrixXd sigma = (centered.transpose() * centered) / static_cast<double>(n - 1);
  const double trace = sigma.trace();
  const double eps = trace > 0.0 ? eps_scale * trace / static_cast<double>(d) : eps_scale;
  sigma.diagonal().array() += eps;
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularAfterRegularization, "covariance is not positive-definite after regularization");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  inv = ((inv + inv.transpose()) * 0.5).eval();
  if (!inv.allFinite())
    throw Error(ErrorCode::SingularAfterRegularization, "inverse covariance has non-finite entries");

  CovarianceModel model;
  model.dimension = d;
  model.epsilon = eps;
  model.samples = n;
  model.mean.assign(mean.data(), mean.data() + d);
  model.inverse.resize(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) model.inverse[i * d + j] = inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return model;
}

std::vector<double> minmax_normalize(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::EmptyInput, "minmax_normalize of an empty list");
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double mn = *lo, mx = *hi;
  std::vector<double> out(xs.size(), 0.0);
  if (mx == mn) return out;
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - mn) / (mx - mn);
  return out;
}

}  // namespace vmh

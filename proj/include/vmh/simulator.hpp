// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vmh/corpus.hpp"
#include "vmh/distance.hpp"
#include "vmh/embedding.hpp"
#include "vmh/scorer.hpp"

namespace vmh {

enum class Verdict { Correct, FalseMatch, Tie };

std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view s);

/// Correct iff d_pos < d_neg; Tie iff equal.
Verdict verdict_from_distances(double d_pos, double d_neg);
/// Correct iff s_pos > s_neg; Tie iff equal.
Verdict verdict_from_scores(double s_pos, double s_neg);

struct MethodSpec {
  std::shared_ptr<EmbeddingProvider> provider;
  MetricId metric = MetricId::CD;
  /// Required for MD. evaluate() fits one per provider when absent.
  std::shared_ptr<const CovarianceModel> covariance;

  /// "<model id>/<metric>", e.g. "bow-256/CD".
  std::string id() const;
};

enum class MethodKind { Distance, Score };

std::string_view to_string(MethodKind k);

struct MethodInfo {
  std::string id;
  MethodKind kind = MethodKind::Distance;

  bool operator==(const MethodInfo&) const = default;
};

/// One (triplet, method) result. For score methods d_pos/d_neg hold the scores.
/// A failed outcome carries an error instead of a verdict.
struct MatchOutcome {
  std::string triplet_id;
  std::string method_id;
  MRCategory category = MRCategory::Other;
  double d_pos = 0.0;
  double d_neg = 0.0;
  Verdict verdict = Verdict::Tie;
  std::optional<ErrorCode> error_code;
  std::string error;

  bool ok() const noexcept { return !error_code.has_value(); }
  bool operator==(const MatchOutcome&) const = default;
};

struct EvalReport {
  std::string corpus_hash;
  std::string corpus_name;
  std::vector<MethodInfo> methods;
  std::vector<MatchOutcome> outcomes;  // method-major, corpus order within a method

  bool operator==(const EvalReport&) const = default;
};

/// Counts over valid outcomes. Errors are tallied separately and never enter n.
struct Tally {
  std::size_t n = 0;
  std::size_t correct = 0;
  std::size_t ties = 0;
  std::size_t errors = 0;
  double sum_d_pos = 0.0;
  double sum_d_neg = 0.0;

  void add(const MatchOutcome& o);
  /// correct / n, NaN when n == 0.
  double accuracy() const;
  double avg_d_pos() const;
  double avg_d_neg() const;
};

/// Tally of one method, restricted to a category when given.
Tally tally(const EvalReport& r, std::string_view method_id, std::optional<MRCategory> category = std::nullopt);

struct EvalOptions {
  std::size_t threads = 0;  // 0: hardware concurrency
  double eps_scale = 1e-6;
};

/// Embeds, normalizes and compares one triplet. Errors are rethrown with the triplet id prefixed.
MatchOutcome match_triplet(const Triplet& t, const MethodSpec& m);

/// One outcome per (triplet, method). Provider and metric failures become error outcomes.
EvalReport evaluate(const Corpus& c, std::vector<MethodSpec> methods, const EvalOptions& opts = {});

enum class ScoreOrder { Forward, Reverse };

/// Forward scores (base, candidate); Reverse scores (candidate, base) and suffixes the id with "-R".
EvalReport evaluate_with_scorer(const Corpus& c, Scorer& s, ScoreOrder order, const EvalOptions& opts = {});

/// Concatenates methods and outcomes of reports over the same corpus. Throws IncompatibleDumps.
EvalReport combine_reports(const std::vector<EvalReport>& reports);

struct AccuracyDrop {
  std::string method_id;
  double metamorphic = 0.0;
  double control = 0.0;
  double drop = 0.0;  // control - metamorphic
};

/// One row per method present in both reports, in the order of `metamorphic`.
std::vector<AccuracyDrop> accuracy_drop(const EvalReport& metamorphic, const EvalReport& control);

}  // namespace vmh

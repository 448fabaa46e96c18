// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "vmh/http.hpp"

namespace vmh {

enum class ScoreSemantics { Similarity, EntailmentProbability };

enum class ScorerKind { Http, Cassette, Containment, Echo };

struct ScorerSpec {
  ScorerKind kind = ScorerKind::Http;
  std::string id;
  std::string endpoint;
  ScoreSemantics semantics = ScoreSemantics::EntailmentProbability;
  bool order_sensitive = true;
  std::string cassette;  // line-delimited {s1_hash, s2_hash, score}
  std::string api_key_env = "VMH_SCORER_API_KEY";
  HttpOptions http;
};

/// "containment", "echo", "cassette:PATH[;opts]" or "http:URL[;opts]" where opts are
/// id=NAME, semantics=similarity|entailment, symmetric, cassette=PATH, key_env=VAR,
/// timeout_ms=N, retries=N. A bare http:// or https:// URL needs no "http:" prefix.
ScorerSpec parse_scorer_spec(std::string_view text);

class Scorer {
 public:
  explicit Scorer(ScorerSpec spec) : spec_(std::move(spec)) {}
  virtual ~Scorer() = default;
  const ScorerSpec& spec() const noexcept { return spec_; }
  const std::string& id() const noexcept { return spec_.id; }

  /// Thread-safe. Symmetric scorers see the pair in a canonical order.
  /// Throws ScorerError, or RangeViolation for anything outside [0,1].
  double score(std::string_view s1, std::string_view s2);

 protected:
  virtual double raw_score(std::string_view s1, std::string_view s2) = 0;

 private:
  ScorerSpec spec_;
};

/// 1 if the tokens of s2 occur as a contiguous run inside the tokens of s1, else 0.
class ContainmentScorer final : public Scorer {
 public:
  ContainmentScorer();

 protected:
  double raw_score(std::string_view s1, std::string_view s2) override;
};

/// 1 for equal texts, otherwise the Jaccard index of the token sets.
class EchoScorer final : public Scorer {
 public:
  EchoScorer();

 protected:
  double raw_score(std::string_view s1, std::string_view s2) override;
};

/// HTTP scorer {s1, s2} -> {score}. With a cassette, recorded pairs are replayed and new
/// responses appended. Without an endpoint the cassette is replay-only.
class HttpScorer final : public Scorer {
 public:
  explicit HttpScorer(ScorerSpec spec);
  std::size_t recorded() const;

 protected:
  double raw_score(std::string_view s1, std::string_view s2) override;

 private:
  static std::string key(std::string_view s1, std::string_view s2);

  mutable std::mutex mu_;
  std::unordered_map<std::string, double> tape_;
};

/// Parses a scorer response body. Throws ScorerError or RangeViolation.
double parse_score_response(std::string_view body);

std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec);

}  // namespace vmh

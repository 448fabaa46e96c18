// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vmh/error.hpp"

namespace vmh {

enum class Source { Collected, Generated };

enum class RelationLabel { Entailment, Contradiction, Neutral, Other };

/// Six word-level relations, two sentence-level ones, and Other.
enum class MRCategory { WordSwap, ObjSub, ActSub, NegaExp, WordDel, QuantSub, ErrTrans, ErrNli, Other };

inline constexpr std::size_t kCategoryCount = 9;
inline constexpr std::array<MRCategory, 8> kTripletCategories = {
    MRCategory::WordSwap, MRCategory::ObjSub,   MRCategory::ActSub,   MRCategory::NegaExp,
    MRCategory::WordDel,  MRCategory::QuantSub, MRCategory::ErrTrans, MRCategory::ErrNli};

std::string_view to_string(Source s);
std::string_view to_string(RelationLabel l);
std::string_view to_string(MRCategory c);
std::optional<Source> parse_source(std::string_view s);
std::optional<RelationLabel> parse_label(std::string_view s);  // case-insensitive
std::optional<MRCategory> parse_category(std::string_view s);

struct Sentence {
  std::string id;
  std::string text;
  Source source = Source::Collected;

  bool operator==(const Sentence&) const = default;
};

struct SentencePair {
  std::string id;
  Sentence s1;
  Sentence s2;
  RelationLabel label = RelationLabel::Other;
};

/// Sentence id convention for triplet slots: "<triplet id>/<slot>".
std::string slot_id(std::string_view triplet_id, std::string_view slot);

struct Triplet {
  std::string id;
  Sentence base;
  Sentence positive;
  Sentence negative;
  MRCategory category = MRCategory::Other;

  bool operator==(const Triplet&) const = default;
};

enum class Violation { EmptyText, PairwiseDistinct, CategoryOther, EmptyId };

std::string_view to_string(Violation v);

/// Empty iff every triplet invariant holds.
std::vector<Violation> validate_triplet(const Triplet& t);

struct DisplacedNegative {
  std::string triplet_id;
  Sentence negative;

  bool operator==(const DisplacedNegative&) const = default;
};

struct CorpusMetadata {
  std::string name;
  std::optional<std::uint64_t> seed;
  /// Toggled by make_nonmetamorphic so a double application restores the file.
  bool transformed = false;
  /// Triplets left unswapped by make_nonmetamorphic (odd tail of a category).
  std::vector<std::string> unpaired;
  /// Original negatives replaced by make_nonmetamorphic.
  std::vector<DisplacedNegative> displaced;

  bool operator==(const CorpusMetadata&) const = default;
};

/// Ordered triplets plus metadata. Immutable once built; composition counts
/// are derived from the triplets.
class Corpus {
 public:
  Corpus() = default;
  /// Validates every triplet and id uniqueness; throws CorpusError.
  explicit Corpus(std::vector<Triplet> triplets, CorpusMetadata meta = {});

  const std::vector<Triplet>& triplets() const noexcept { return triplets_; }
  const CorpusMetadata& metadata() const noexcept { return meta_; }
  std::size_t size() const noexcept { return triplets_.size(); }
  bool empty() const noexcept { return triplets_.empty(); }
  std::array<std::size_t, kCategoryCount> composition() const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<Triplet> triplets_;
  CorpusMetadata meta_;
};

struct RecordIssue {
  std::size_t line = 0;  // 1-based; 0 when not tied to an input line
  ErrorCode code = ErrorCode::MalformedRecord;
  std::string detail;
};

/// Raised by parsing and corpus construction with every problem found.
class CorpusError : public Error {
 public:
  explicit CorpusError(std::vector<RecordIssue> issues);
  const std::vector<RecordIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<RecordIssue> issues_;
};

/// Line-delimited JSON. An optional first line {"corpus": {...}} carries the
/// metadata; every other non-blank line is one triplet record. Texts are
/// NFC-normalized on ingest.
Corpus parse_corpus(std::istream& in);
Corpus parse_corpus_text(std::string_view text);
Corpus load_corpus(const std::string& path);

/// Metadata header line followed by one line per triplet.
std::string serialize_corpus(const Corpus& c);

/// Stable digest of the serialized corpus, embedded in outcome dumps.
std::string corpus_hash(const Corpus& c);

/// Pair records {id, s1, s2, label} with an optional "category" (tagged
/// pairs). Unknown fields are kept in `raw` so the tagger can append to them.
struct PairRecord {
  SentencePair pair;
  std::optional<MRCategory> category;
  std::string raw;
};

std::vector<PairRecord> parse_pairs(std::istream& in);

}  // namespace vmh

// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vmh/corpus.hpp"

namespace vmh {

/// Lowercased word tokens with their original surface forms.
struct TokenSequence {
  std::vector<std::string> tokens;
  std::vector<std::string> surface;

  std::size_t size() const noexcept { return tokens.size(); }
  bool operator==(const TokenSequence& o) const { return tokens == o.tokens; }
};

/// Lowercase, split on whitespace, strip leading/trailing punctuation from
/// each token (a sign or decimal point that belongs to a number is kept),
/// drop tokens that end up empty.
TokenSequence tokenize(std::string_view text);

struct Quantifier {
  std::string value;
  std::size_t offset = 0;  // byte offset into the text
  std::size_t length = 0;

  bool operator==(const Quantifier&) const = default;
};

/// Every maximal match of -?\d+(?:\.\d+)? in order of occurrence.
std::vector<Quantifier> extract_quantifiers(std::string_view text);

enum class PosTag { NN, PRP, JJ, RB, VB, OtherTag };

std::string_view to_string(PosTag t);

/// Coarse class of a Penn Treebank tag by prefix (NNS -> NN, PRP$ -> PRP, ...).
PosTag coarse_tag(std::string_view penn);

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  /// One tag per token position.
  virtual std::vector<PosTag> tag(const TokenSequence& seq) const = 0;
};

/// Word -> most frequent tag lexicon with suffix fallback rules.
class LexiconTagger final : public PosTagger {
 public:
  /// Parses "word<TAB>TAG" lines; '#' starts a comment line.
  static LexiconTagger from_text(std::string_view lexicon);
  static LexiconTagger from_file(const std::string& path);
  /// The bundled lexicon, loaded once.
  static const LexiconTagger& bundled();

  std::vector<PosTag> tag(const TokenSequence& seq) const override;
  PosTag tag_word(std::string_view lower, std::string_view surface) const;
  std::size_t lexicon_size() const noexcept { return lexicon_.size(); }

 private:
  std::unordered_map<std::string, std::string> lexicon_;
};

std::vector<PosTag> pos_tag(const TokenSequence& seq, const PosTagger& tagger = LexiconTagger::bundled());

struct DiffPair {
  std::string w1;
  std::string w2;
  std::size_t position = 0;

  bool operator==(const DiffPair&) const = default;
};

/// First position where equal-length sequences differ. Throws NoDifference.
DiffPair find_diff(const TokenSequence& w1, const TokenSequence& w2);

/// Word-level metamorphosis tagging of a labeled pair.
MRCategory gold_tag(const SentencePair& pair, const PosTagger& tagger = LexiconTagger::bundled());

struct SentenceLevelThresholds {
  double min_length_ratio = 0.75;
  double max_length_ratio = 1.33;
  double min_content_overlap = 0.6;  // Jaccard over content-word sets
  double min_claim_coverage = 0.8;   // shorter sentence covered by the longer
};

/// ErrTrans for Contradiction pairs of similar length and shared keywords,
/// ErrNli for Entailment pairs where one sentence's content words are
/// contained in the other, otherwise Other.
MRCategory tag_sentence_level(const SentencePair& pair, const SentenceLevelThresholds& th = {});

/// gold_tag, then the sentence-level heuristics when it yields Other.
MRCategory tag_pair(const SentencePair& pair, const PosTagger& tagger = LexiconTagger::bundled());

/// Bundled function-word list.
const std::set<std::string, std::less<>>& stopwords();

/// Tokens that are not stopwords, as a set.
std::set<std::string, std::less<>> content_words(const TokenSequence& seq);

}  // namespace vmh

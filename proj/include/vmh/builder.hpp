// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vmh/corpus.hpp"
#include "vmh/generation.hpp"
#include "vmh/rng.hpp"

namespace vmh {

/// Replaces the first quantifier q of `base` by q*r, r uniform in (0, 2),
/// redrawn while |r - 1| < 0.1 or the formatted value equals q or falls
/// outside the open interval between 0 and 2q. Integers stay integers;
/// decimals keep their number of decimal places. Throws NoQuantifier.
Sentence substitute_quantifier(const Sentence& base, RngState rng);

/// Order-aware token overlap in [0, 1]: shared token bigrams (multiset)
/// over the larger bigram count; unigrams for one-token texts.
double structural_overlap(std::string_view a, std::string_view b);

inline constexpr int kGenerationAttempts = 3;
inline constexpr double kMaxPositiveOverlap = 0.9;

/// Paraphrase of `base` from the generator. Candidates that are empty,
/// token-identical to the base, or overlap it by more than 0.9 are
/// rejected; after three rejections throws GenerationFailed.
Sentence generate_positive(const Sentence& base, TextGenerator& gen, std::uint64_t seed = 0);

/// Rewrite of `context` without the evidence that supports `claim`. The
/// output must lack at least one content word shared by claim and context.
/// Throws GenerationFailed (no usable text) or ValidationFailed.
Sentence generate_negative_by_evidence_removal(const Sentence& claim, const Sentence& context, TextGenerator& gen,
                                               std::uint64_t seed = 0);

/// Non-metamorphic control corpus. Within each category, consecutive
/// triplets (1st/2nd, 3rd/4th, ...) keep base and positive and take each
/// other's positive as negative; an odd tail is left as is and listed in
/// metadata. The displaced negatives are kept in metadata, and applying the
/// operation to a transformed corpus restores them, so the operation is an
/// involution.
Corpus make_nonmetamorphic(const Corpus& c);

struct BuildOptions {
  RngState seed;
  std::size_t max_in_flight = 4;
  std::string corpus_name;
};

struct BuildFailure {
  std::string pair_id;
  ErrorCode code;
  std::string detail;
};

struct BuildResult {
  Corpus corpus;
  std::vector<BuildFailure> failures;
  std::size_t skipped = 0;  // pairs tagged Other or untagged
  std::size_t attempted = 0;
};

/// Completes tagged pairs into triplets. QuantSub: base s1, generated
/// positive, substituted negative. ErrNli: the shorter sentence is the base,
/// the longer the positive, the negative has its evidence removed. Other
/// word-level and ErrTrans pairs: base s1, negative s2, generated positive.
/// Per-pair RNG streams and seeds come from seed XOR record index, so output
/// does not depend on scheduling.
BuildResult build_triplets(const std::vector<PairRecord>& tagged, TextGenerator& gen, const BuildOptions& opts);

}  // namespace vmh

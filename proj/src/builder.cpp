// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmh/builder.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <thread>

#include "vmh/tagger.hpp"
#include "vmh/text.hpp"

namespace vmh {

namespace {

constexpr int kMaxQuantifierDraws = 10000;

std::string format_like(double value, std::size_t decimals) {
  if (decimals == 0) return std::to_string(std::llround(value));
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, static_cast<int>(decimals));
  if (ec != std::errc{}) throw Error(ErrorCode::InvalidArgument, "cannot format quantifier");
  return std::string(buf, end);
}

bool strictly_between_zero_and(double x, double bound) {
  return bound > 0 ? (x > 0 && x < bound) : (x < 0 && x > bound);
}

std::vector<std::string> bigrams(const std::vector<std::string>& toks) {
  if (toks.size() < 2) return toks;
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) out.push_back(toks[i] + '\x1f' + toks[i + 1]);
  return out;
}

Sentence generated(std::string text, std::string id) {
  return Sentence{std::move(id), nfc(trim(text)), Source::Generated};
}

}  // namespace

Sentence substitute_quantifier(const Sentence& base, RngState state) {
  const auto quants = extract_quantifiers(base.text);
  if (quants.empty()) throw Error(ErrorCode::NoQuantifier, "no quantifier in: " + base.text);
  const auto& q = quants.front();
  const auto dot = q.value.find('.');
  const std::size_t decimals = dot == std::string::npos ? 0 : q.value.size() - dot - 1;
  const double value = std::stod(q.value);
  const double bound = 2.0 * value;

  Rng rng(state);
  for (int draw = 0; draw < kMaxQuantifierDraws; ++draw) {
    const double r = 2.0 * rng.uniform();
    if (r == 0.0 || std::abs(r - 1.0) < 0.1) continue;
    const auto candidate = format_like(value * r, decimals);
    if (candidate == q.value || !strictly_between_zero_and(std::stod(candidate), bound)) continue;
    Sentence out = base;
    out.text.replace(q.offset, q.length, candidate);
    out.source = Source::Generated;
    return out;
  }
  throw Error(ErrorCode::NoQuantifier, "quantifier " + q.value + " admits no distinct substitute");
}

double structural_overlap(std::string_view a, std::string_view b) {
  auto ga = bigrams(tokenize(a).tokens);
  auto gb = bigrams(tokenize(b).tokens);
  if (ga.empty() || gb.empty()) return ga.empty() && gb.empty() ? 1.0 : 0.0;
  std::sort(ga.begin(), ga.end());
  std::sort(gb.begin(), gb.end());
  std::vector<std::string> shared;
  std::set_intersection(ga.begin(), ga.end(), gb.begin(), gb.end(), std::back_inserter(shared));
  return static_cast<double>(shared.size()) / static_cast<double>(std::max(ga.size(), gb.size()));
}

Sentence generate_positive(const Sentence& base, TextGenerator& gen, std::uint64_t seed) {
  GenerationRequest req;
  req.kind = GenerationKind::PositiveRewrite;
  req.template_id = std::string(kPositiveRewriteTemplate);
  req.variables["base"] = base.text;
  check_request(req);

  const auto base_tokens = tokenize(base.text);
  std::string last_reason = "no attempt";
  for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
    req.seed = seed + static_cast<std::uint64_t>(attempt);
    const std::string text = nfc(trim(gen.generate(req)));
    if (text.empty()) {
      last_reason = "empty output";
    } else if (tokenize(text) == base_tokens) {
      last_reason = "output identical to base";
    } else if (double ov = structural_overlap(text, base.text); ov > kMaxPositiveOverlap) {
      last_reason = "output overlaps base by " + std::to_string(ov);
    } else {
      return generated(text, base.id);
    }
  }
  throw Error(ErrorCode::GenerationFailed,
              "positive rewrite rejected " + std::to_string(kGenerationAttempts) + " times: " + last_reason);
}

Sentence generate_negative_by_evidence_removal(const Sentence& claim, const Sentence& context, TextGenerator& gen,
                                               std::uint64_t seed) {
  GenerationRequest req;
  req.kind = GenerationKind::NegativeEvidenceRemoval;
  req.template_id = std::string(kEvidenceRemovalTemplate);
  req.variables["claim"] = claim.text;
  req.variables["context"] = context.text;
  check_request(req);

  const auto claim_words = content_words(tokenize(claim.text));
  const auto context_words = content_words(tokenize(context.text));
  std::vector<std::string> evidence;
  std::set_intersection(claim_words.begin(), claim_words.end(), context_words.begin(), context_words.end(),
                        std::back_inserter(evidence));

  bool produced = false;
  std::string last_reason = "no attempt";
  for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
    req.seed = seed + static_cast<std::uint64_t>(attempt);
    const std::string text = nfc(trim(gen.generate(req)));
    if (text.empty()) {
      last_reason = "empty output";
      continue;
    }
    produced = true;
    const auto out_words = content_words(tokenize(text));
    const bool removed_some = std::any_of(evidence.begin(), evidence.end(),
                                          [&](const std::string& w) { return !out_words.contains(w); });
    if (removed_some && text != context.text) return generated(text, context.id);
    last_reason = "output keeps every evidence word shared by claim and context";
  }
  throw Error(produced ? ErrorCode::ValidationFailed : ErrorCode::GenerationFailed,
              "evidence removal failed: " + last_reason);
}

Corpus make_nonmetamorphic(const Corpus& c) {
  auto triplets = c.triplets();
  CorpusMetadata meta = c.metadata();

  if (meta.transformed) {
    std::map<std::string, const Sentence*> originals;
    for (const auto& d : meta.displaced) originals[d.triplet_id] = &d.negative;
    for (auto& t : triplets)
      if (auto it = originals.find(t.id); it != originals.end()) t.negative = *it->second;
    meta.displaced.clear();
    meta.unpaired.clear();
    meta.transformed = false;
    return Corpus(std::move(triplets), std::move(meta));
  }

  std::map<MRCategory, std::vector<std::size_t>> by_category;
  for (std::size_t i = 0; i < triplets.size(); ++i) by_category[triplets[i].category].push_back(i);

  std::vector<std::optional<Sentence>> displaced(triplets.size());
  meta.unpaired.clear();
  for (const auto& [cat, idx] : by_category) {
    for (std::size_t k = 0; k + 1 < idx.size(); k += 2) {
      auto& a = triplets[idx[k]];
      auto& b = triplets[idx[k + 1]];
      displaced[idx[k]] = a.negative;
      displaced[idx[k + 1]] = b.negative;
      a.negative = Sentence{slot_id(a.id, "negative"), b.positive.text, b.positive.source};
      b.negative = Sentence{slot_id(b.id, "negative"), a.positive.text, a.positive.source};
    }
    if (idx.size() % 2 == 1) meta.unpaired.push_back(triplets[idx.back()].id);
  }
  meta.displaced.clear();
  for (std::size_t i = 0; i < triplets.size(); ++i)
    if (displaced[i]) meta.displaced.push_back({triplets[i].id, *displaced[i]});
  std::sort(meta.unpaired.begin(), meta.unpaired.end());
  meta.transformed = true;
  return Corpus(std::move(triplets), std::move(meta));
}

namespace {

Triplet complete_pair(const PairRecord& rec, MRCategory cat, TextGenerator& gen, RngState stream) {
  const auto& p = rec.pair;
  Triplet t;
  t.id = p.id;
  t.category = cat;
  auto slot = [&](const Sentence& s, std::string_view name) { return Sentence{slot_id(t.id, name), s.text, s.source}; };

  switch (cat) {
    case MRCategory::QuantSub:
      t.base = slot(p.s1, "base");
      t.negative = slot(substitute_quantifier(p.s1, stream), "negative");
      t.positive = slot(generate_positive(p.s1, gen, stream.seed), "positive");
      break;
    case MRCategory::ErrNli: {
      const bool s1_is_claim = tokenize(p.s1.text).size() <= tokenize(p.s2.text).size();
      const auto& claim = s1_is_claim ? p.s1 : p.s2;
      const auto& context = s1_is_claim ? p.s2 : p.s1;
      t.base = slot(claim, "base");
      t.positive = slot(context, "positive");
      t.negative = slot(generate_negative_by_evidence_removal(claim, context, gen, stream.seed), "negative");
      break;
    }
    default:
      t.base = slot(p.s1, "base");
      t.negative = slot(p.s2, "negative");
      t.positive = slot(generate_positive(p.s1, gen, stream.seed), "positive");
      break;
  }
  if (auto v = validate_triplet(t); !v.empty())
    throw Error(ErrorCode::InvariantViolation, "built triplet violates " + std::string(to_string(v.front())));
  return t;
}

}  // namespace

BuildResult build_triplets(const std::vector<PairRecord>& tagged, TextGenerator& gen, const BuildOptions& opts) {
  struct Slot {
    std::optional<Triplet> triplet;
    std::optional<BuildFailure> failure;
    bool skipped = false;
  };
  std::vector<Slot> slots(tagged.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < tagged.size(); i = next++) {
      const auto& rec = tagged[i];
      if (!rec.category || *rec.category == MRCategory::Other) {
        slots[i].skipped = true;
        continue;
      }
      try {
        slots[i].triplet = complete_pair(rec, *rec.category, gen, opts.seed.split(i));
      } catch (const Error& e) {
        slots[i].failure = BuildFailure{rec.pair.id, e.code(), e.what()};
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(opts.max_in_flight, 1, std::max<std::size_t>(1, tagged.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
  }

  BuildResult result;
  std::vector<Triplet> triplets;
  for (auto& s : slots) {
    if (s.skipped) {
      ++result.skipped;
      continue;
    }
    ++result.attempted;
    if (s.triplet) triplets.push_back(std::move(*s.triplet));
    if (s.failure) result.failures.push_back(std::move(*s.failure));
  }
  CorpusMetadata meta;
  meta.name = opts.corpus_name;
  meta.seed = opts.seed.seed;
  try {
    result.corpus = Corpus(std::move(triplets), std::move(meta));
  } catch (const CorpusError& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("built corpus is invalid: ") + e.what());
  }
  return result;
}

}  // namespace vmh

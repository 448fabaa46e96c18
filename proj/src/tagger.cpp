// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmh/tagger.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <map>
#include <regex>

#include "vmh/resources.hpp"
#include "vmh/text.hpp"

namespace vmh {

namespace {

struct CodePoint {
  UChar32 cp;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  const auto len = static_cast<int32_t>(s.size());
  for (int32_t i = 0; i < len;) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s.data(), i, len, c);
    out.push_back({c < 0 ? 0xFFFD : c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
  }
  return out;
}

bool is_strippable(UChar32 c) {
  if (u_ispunct(c)) return true;
  const auto cat = u_charType(c);
  return cat == U_CURRENCY_SYMBOL || cat == U_MODIFIER_SYMBOL || cat == U_MATH_SYMBOL || cat == U_OTHER_SYMBOL;
}

bool is_ascii_digit(UChar32 c) { return c >= '0' && c <= '9'; }

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool err = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, c, err);
  if (!err) out.append(buf, static_cast<std::size_t>(n));
}

const std::regex& quantifier_re() {
  static const std::regex re(R"(-?\d+(?:\.\d+)?)");
  return re;
}

bool is_number_token(std::string_view tok) {
  return std::regex_match(tok.begin(), tok.end(), quantifier_re());
}

using Counts = std::map<std::string, std::size_t, std::less<>>;

Counts count(const std::vector<std::string>& words) {
  Counts c;
  for (const auto& w : words) ++c[w];
  return c;
}

// True when `small` is a sub-multiset of `big`; fills `removed` with big - small.
bool sub_multiset(const Counts& small, const Counts& big, std::vector<std::string>& removed) {
  for (const auto& [w, n] : small) {
    auto it = big.find(w);
    if (it == big.end() || it->second < n) return false;
  }
  removed.clear();
  for (const auto& [w, n] : big) {
    auto it = small.find(w);
    const std::size_t have = it == small.end() ? 0 : it->second;
    for (std::size_t i = have; i < n; ++i) removed.push_back(w);
  }
  return true;
}

bool in(PosTag t, std::initializer_list<PosTag> set) { return std::find(set.begin(), set.end(), t) != set.end(); }

}  // namespace

TokenSequence tokenize(std::string_view text) {
  TokenSequence seq;
  const auto cps = decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && u_isUWhiteSpace(cps[i].cp)) ++i;
    std::size_t j = i;
    while (j < cps.size() && !u_isUWhiteSpace(cps[j].cp)) ++j;
    if (j == i) break;
    std::size_t b = i, e = j;
    while (b < e && is_strippable(cps[b].cp)) {
      // Keep the sign of a negative number.
      if (cps[b].cp == '-' && b + 1 < e && is_ascii_digit(cps[b + 1].cp)) break;
      ++b;
    }
    while (e > b && is_strippable(cps[e - 1].cp)) --e;
    if (e > b) {
      std::string lower;
      for (std::size_t k = b; k < e; ++k) append_utf8(lower, u_tolower(cps[k].cp));
      seq.tokens.push_back(std::move(lower));
      seq.surface.emplace_back(text.substr(cps[b].begin, cps[e - 1].end - cps[b].begin));
    }
    i = j;
  }
  return seq;
}

std::vector<Quantifier> extract_quantifiers(std::string_view text) {
  std::vector<Quantifier> out;
  using It = std::string_view::const_iterator;
  for (std::regex_iterator<It> it(text.begin(), text.end(), quantifier_re()), end; it != end; ++it) {
    const auto& m = *it;
    out.push_back({m.str(), static_cast<std::size_t>(m.position()), static_cast<std::size_t>(m.length())});
  }
  return out;
}

std::string_view to_string(PosTag t) {
  switch (t) {
    case PosTag::NN: return "NN";
    case PosTag::PRP: return "PRP";
    case PosTag::JJ: return "JJ";
    case PosTag::RB: return "RB";
    case PosTag::VB: return "VB";
    case PosTag::OtherTag: return "OtherTag";
  }
  return "OtherTag";
}

PosTag coarse_tag(std::string_view penn) {
  if (penn.starts_with("NN")) return PosTag::NN;
  if (penn.starts_with("PRP")) return PosTag::PRP;
  if (penn.starts_with("JJ")) return PosTag::JJ;
  if (penn.starts_with("RB")) return PosTag::RB;
  if (penn.starts_with("VB")) return PosTag::VB;
  return PosTag::OtherTag;
}

LexiconTagger LexiconTagger::from_text(std::string_view lexicon) {
  LexiconTagger t;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  while (pos < lexicon.size()) {
    auto nl = lexicon.find('\n', pos);
    auto line = trim(lexicon.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? lexicon.size() : nl + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size())
      throw Error(ErrorCode::FormatError, "lexicon line " + std::to_string(lineno) + ": expected word<TAB>TAG");
    t.lexicon_.emplace(std::string(line.substr(0, tab)), std::string(trim(line.substr(tab + 1))));
  }
  return t;
}

LexiconTagger LexiconTagger::from_file(const std::string& path) { return from_text(read_file(path)); }

const LexiconTagger& LexiconTagger::bundled() {
  static const LexiconTagger tagger = from_text(resources::get("lexicon"));
  return tagger;
}

PosTag LexiconTagger::tag_word(std::string_view lower, std::string_view /*surface*/) const {
  if (is_number_token(lower)) return PosTag::OtherTag;
  if (auto it = lexicon_.find(std::string(lower)); it != lexicon_.end()) return coarse_tag(it->second);
  if (lower.ends_with("ly")) return PosTag::RB;
  if (lower.ends_with("ing") || lower.ends_with("ed")) return PosTag::VB;
  if (lower.ends_with("ous") || lower.ends_with("ful") || lower.ends_with("ive")) return PosTag::JJ;
  return PosTag::NN;  // capitalized or unknown
}

std::vector<PosTag> LexiconTagger::tag(const TokenSequence& seq) const {
  std::vector<PosTag> out;
  out.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i)
    out.push_back(tag_word(seq.tokens[i], i < seq.surface.size() ? seq.surface[i] : seq.tokens[i]));
  return out;
}

std::vector<PosTag> pos_tag(const TokenSequence& seq, const PosTagger& tagger) { return tagger.tag(seq); }

DiffPair find_diff(const TokenSequence& w1, const TokenSequence& w2) {
  if (w1.size() != w2.size()) throw Error(ErrorCode::InvalidArgument, "find_diff needs equal-length sequences");
  for (std::size_t i = 0; i < w1.size(); ++i)
    if (w1.tokens[i] != w2.tokens[i]) return {w1.tokens[i], w2.tokens[i], i};
  throw Error(ErrorCode::NoDifference, "token sequences are identical");
}

MRCategory gold_tag(const SentencePair& pair, const PosTagger& tagger) {
  if (pair.label == RelationLabel::Entailment) return MRCategory::Other;

  const auto seq1 = tokenize(pair.s1.text);
  const auto seq2 = tokenize(pair.s2.text);
  const auto& w1 = seq1.tokens;
  const auto& w2 = seq2.tokens;
  if (w1.empty() || w2.empty() || w1 == w2) return MRCategory::Other;

  auto sorted1 = w1, sorted2 = w2;
  std::sort(sorted1.begin(), sorted1.end());
  std::sort(sorted2.begin(), sorted2.end());
  if (sorted1 == sorted2) return MRCategory::WordSwap;

  const auto c1 = count(w1);
  const auto c2 = count(w2);
  std::size_t union_size = 0;  // multiset union: max count per word
  for (const auto& [w, n] : c1) {
    auto it = c2.find(w);
    union_size += std::max(n, it == c2.end() ? std::size_t{0} : it->second);
  }
  for (const auto& [w, n] : c2)
    if (!c1.contains(w)) union_size += n;

  if (w1.size() == w2.size() && (union_size - w1.size() <= 1 || union_size - w2.size() <= 1)) {
    const auto diff = find_diff(seq1, seq2);
    const auto q1 = extract_quantifiers(pair.s1.text);
    const auto q2 = extract_quantifiers(pair.s2.text);
    auto has = [](const std::vector<Quantifier>& qs, const std::string& w) {
      return std::any_of(qs.begin(), qs.end(), [&](const Quantifier& q) { return q.value == w; });
    };
    if (has(q1, diff.w1) && has(q2, diff.w2)) return MRCategory::QuantSub;

    const auto t1 = tagger.tag(seq1)[diff.position];
    const auto t2 = tagger.tag(seq2)[diff.position];
    if (in(t1, {PosTag::NN, PosTag::PRP}) && in(t2, {PosTag::NN, PosTag::PRP})) return MRCategory::ObjSub;
    if (in(t1, {PosTag::JJ, PosTag::RB}) && in(t2, {PosTag::JJ, PosTag::RB})) return MRCategory::NegaExp;
    if (t1 == PosTag::VB && t2 == PosTag::VB) return MRCategory::ActSub;
    return MRCategory::Other;
  }

  std::vector<std::string> removed;
  const bool contained = (w1.size() < w2.size() && sub_multiset(c1, c2, removed)) ||
                         (w2.size() < w1.size() && sub_multiset(c2, c1, removed));
  if (!contained) return MRCategory::Other;
  const bool has_not = std::find(removed.begin(), removed.end(), "not") != removed.end();
  return removed.size() <= 2 && has_not ? MRCategory::NegaExp : MRCategory::WordDel;
}

const std::set<std::string, std::less<>>& stopwords() {
  static const auto words = [] {
    std::set<std::string, std::less<>> s;
    std::string_view text = resources::get("stopwords");
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
      pos = nl == std::string_view::npos ? text.size() : nl + 1;
      if (!line.empty() && line.front() != '#') s.emplace(line);
    }
    return s;
  }();
  return words;
}

std::set<std::string, std::less<>> content_words(const TokenSequence& seq) {
  std::set<std::string, std::less<>> out;
  const auto& stop = stopwords();
  for (const auto& t : seq.tokens)
    if (!stop.contains(t)) out.insert(t);
  return out;
}

MRCategory tag_sentence_level(const SentencePair& pair, const SentenceLevelThresholds& th) {
  const auto seq1 = tokenize(pair.s1.text);
  const auto seq2 = tokenize(pair.s2.text);
  if (seq1.size() == 0 || seq2.size() == 0) return MRCategory::Other;
  const auto cw1 = content_words(seq1);
  const auto cw2 = content_words(seq2);
  std::size_t shared = 0;
  for (const auto& w : cw1) shared += cw2.contains(w);

  if (pair.label == RelationLabel::Contradiction) {
    const double ratio = static_cast<double>(seq1.size()) / static_cast<double>(seq2.size());
    const std::size_t uni = cw1.size() + cw2.size() - shared;
    const double overlap = uni == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(uni);
    if (ratio >= th.min_length_ratio && ratio <= th.max_length_ratio && overlap >= th.min_content_overlap)
      return MRCategory::ErrTrans;
  } else if (pair.label == RelationLabel::Entailment) {
    const auto& claim = seq1.size() <= seq2.size() ? cw1 : cw2;
    if (!claim.empty() && static_cast<double>(shared) / static_cast<double>(claim.size()) >= th.min_claim_coverage)
      return MRCategory::ErrNli;
  }
  return MRCategory::Other;
}

MRCategory tag_pair(const SentencePair& pair, const PosTagger& tagger) {
  const auto word_level = gold_tag(pair, tagger);
  return word_level != MRCategory::Other ? word_level : tag_sentence_level(pair);
}

}  // namespace vmh

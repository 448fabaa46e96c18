// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmh/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "vmh/text.hpp"

namespace vmh {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "WordSwap", "ObjSub", "ActSub", "NegaExp", "WordDel", "QuantSub", "ErrTrans", "ErrNli", "Other"};

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string summarize(const std::vector<RecordIssue>& issues) {
  if (issues.empty()) return "corpus error";
  const auto& first = issues.front();
  std::string msg = std::string(to_string(first.code));
  if (first.line) msg += " at line " + std::to_string(first.line);
  msg += ": " + first.detail;
  if (issues.size() > 1) msg += " (+" + std::to_string(issues.size() - 1) + " more)";
  return msg;
}

ErrorCode violation_code(Violation v) {
  return v == Violation::EmptyText ? ErrorCode::EmptyText : ErrorCode::InvariantViolation;
}

}  // namespace

std::string slot_id(std::string_view triplet_id, std::string_view slot) {
  std::string id(triplet_id);
  id += '/';
  id += slot;
  return id;
}

std::string_view to_string(Source s) { return s == Source::Collected ? "Collected" : "Generated"; }

std::string_view to_string(RelationLabel l) {
  switch (l) {
    case RelationLabel::Entailment: return "Entailment";
    case RelationLabel::Contradiction: return "Contradiction";
    case RelationLabel::Neutral: return "Neutral";
    case RelationLabel::Other: return "Other";
  }
  return "Other";
}

std::string_view to_string(MRCategory c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<Source> parse_source(std::string_view s) {
  if (s == "Collected") return Source::Collected;
  if (s == "Generated") return Source::Generated;
  return std::nullopt;
}

std::optional<RelationLabel> parse_label(std::string_view s) {
  const auto l = lower_ascii(s);
  if (l == "entailment") return RelationLabel::Entailment;
  if (l == "contradiction") return RelationLabel::Contradiction;
  if (l == "neutral") return RelationLabel::Neutral;
  if (l == "other") return RelationLabel::Other;
  return std::nullopt;
}

std::optional<MRCategory> parse_category(std::string_view s) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i)
    if (kCategoryNames[i] == s) return static_cast<MRCategory>(i);
  return std::nullopt;
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::EmptyText: return "EmptyText";
    case Violation::PairwiseDistinct: return "PairwiseDistinct";
    case Violation::CategoryOther: return "CategoryOther";
    case Violation::EmptyId: return "EmptyId";
  }
  return "Unknown";
}

std::vector<Violation> validate_triplet(const Triplet& t) {
  std::vector<Violation> out;
  if (trim(t.id).empty()) out.push_back(Violation::EmptyId);
  if (trim(t.base.text).empty() || trim(t.positive.text).empty() || trim(t.negative.text).empty())
    out.push_back(Violation::EmptyText);
  if (t.base.text == t.positive.text || t.base.text == t.negative.text || t.positive.text == t.negative.text)
    out.push_back(Violation::PairwiseDistinct);
  if (t.category == MRCategory::Other) out.push_back(Violation::CategoryOther);
  return out;
}

CorpusError::CorpusError(std::vector<RecordIssue> issues)
    : Error(issues.empty() ? ErrorCode::MalformedRecord : issues.front().code, summarize(issues)),
      issues_(std::move(issues)) {}

Corpus::Corpus(std::vector<Triplet> triplets, CorpusMetadata meta)
    : triplets_(std::move(triplets)), meta_(std::move(meta)) {
  std::vector<RecordIssue> issues;
  std::set<std::string, std::less<>> ids;
  for (std::size_t i = 0; i < triplets_.size(); ++i) {
    const auto& t = triplets_[i];
    for (auto v : validate_triplet(t))
      issues.push_back({0, violation_code(v), "triplet " + t.id + ": " + std::string(to_string(v))});
    if (!ids.insert(t.id).second) issues.push_back({0, ErrorCode::DuplicateId, "duplicate triplet id " + t.id});
  }
  if (!issues.empty()) throw CorpusError(std::move(issues));
}

std::array<std::size_t, kCategoryCount> Corpus::composition() const {
  std::array<std::size_t, kCategoryCount> counts{};
  for (const auto& t : triplets_) ++counts[static_cast<std::size_t>(t.category)];
  return counts;
}

namespace {

Sentence slot_from_json(const ojson& j, const std::string& triplet_id, std::string_view slot) {
  if (!j.is_object()) throw std::runtime_error(std::string(slot) + " must be an object");
  Sentence s;
  s.id = slot_id(triplet_id, slot);
  s.text = nfc(j.at("text").get<std::string>());
  auto src = parse_source(j.at("source").get<std::string>());
  if (!src) throw std::runtime_error(std::string(slot) + ".source must be Collected or Generated");
  s.source = *src;
  return s;
}

ojson slot_to_json(const Sentence& s) {
  ojson j;
  j["text"] = s.text;
  j["source"] = to_string(s.source);
  return j;
}

void parse_header(const ojson& h, CorpusMetadata& meta, std::map<std::string, std::size_t>& declared) {
  if (!h.is_object()) throw std::runtime_error("corpus header must be an object");
  meta.name = h.value("name", "");
  if (h.contains("seed") && !h["seed"].is_null()) meta.seed = h["seed"].get<std::uint64_t>();
  meta.transformed = h.value("transformed", false);
  if (h.contains("unpaired")) meta.unpaired = h["unpaired"].get<std::vector<std::string>>();
  if (h.contains("displaced"))
    for (const auto& d : h["displaced"]) {
      const auto id = d.at("id").get<std::string>();
      meta.displaced.push_back({id, slot_from_json(d, id, "negative")});
    }
  if (h.contains("composition"))
    for (const auto& [k, v] : h["composition"].items()) declared[k] = v.get<std::size_t>();
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
  std::vector<Triplet> triplets;
  std::vector<std::size_t> lines;
  std::vector<RecordIssue> issues;
  CorpusMetadata meta;
  std::map<std::string, std::size_t> declared;
  bool have_header = false;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto j = ojson::parse(line);
      if (!j.is_object()) throw std::runtime_error("record must be a JSON object");
      if (j.contains("corpus")) {
        if (have_header || !triplets.empty()) throw std::runtime_error("corpus header must be the first record");
        parse_header(j["corpus"], meta, declared);
        have_header = true;
        continue;
      }
      Triplet t;
      t.id = j.at("id").get<std::string>();
      auto cat = parse_category(j.at("category").get<std::string>());
      if (!cat) throw std::runtime_error("unknown category " + j["category"].get<std::string>());
      t.category = *cat;
      t.base = slot_from_json(j.at("base"), t.id, "base");
      t.positive = slot_from_json(j.at("positive"), t.id, "positive");
      t.negative = slot_from_json(j.at("negative"), t.id, "negative");
      triplets.push_back(std::move(t));
      lines.push_back(lineno);
    } catch (const Error& e) {
      issues.push_back({lineno, ErrorCode::MalformedRecord, e.what()});
    } catch (const std::exception& e) {
      issues.push_back({lineno, ErrorCode::MalformedRecord, e.what()});
    }
  }

  std::set<std::string, std::less<>> ids;
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const auto& t = triplets[i];
    for (auto v : validate_triplet(t))
      issues.push_back({lines[i], violation_code(v), "triplet " + t.id + ": " + std::string(to_string(v))});
    if (!ids.insert(t.id).second) issues.push_back({lines[i], ErrorCode::DuplicateId, "duplicate triplet id " + t.id});
  }
  if (!declared.empty() && issues.empty()) {
    std::array<std::size_t, kCategoryCount> counts{};
    for (const auto& t : triplets) ++counts[static_cast<std::size_t>(t.category)];
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      auto name = std::string(kCategoryNames[c]);
      auto it = declared.find(name);
      std::size_t want = it == declared.end() ? 0 : it->second;
      if (want != counts[c])
        issues.push_back({1, ErrorCode::MalformedRecord,
                          "header composition for " + name + " is " + std::to_string(want) + " but corpus has " +
                              std::to_string(counts[c])});
    }
  }
  std::stable_sort(issues.begin(), issues.end(), [](const auto& a, const auto& b) { return a.line < b.line; });
  if (!issues.empty()) throw CorpusError(std::move(issues));
  return Corpus(std::move(triplets), std::move(meta));
}

Corpus parse_corpus_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in);
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open corpus " + path);
  return parse_corpus(in);
}

std::string serialize_corpus(const Corpus& c) {
  std::string out;
  const auto& m = c.metadata();
  ojson h;
  h["name"] = m.name;
  h["seed"] = m.seed ? ojson(*m.seed) : ojson(nullptr);
  h["transformed"] = m.transformed;
  ojson comp = ojson::object();
  auto counts = c.composition();
  for (std::size_t i = 0; i < kCategoryCount; ++i)
    if (counts[i]) comp[std::string(kCategoryNames[i])] = counts[i];
  h["composition"] = comp;
  h["unpaired"] = m.unpaired;
  ojson displaced = ojson::array();
  for (const auto& d : m.displaced) {
    ojson e;
    e["id"] = d.triplet_id;
    e["text"] = d.negative.text;
    e["source"] = to_string(d.negative.source);
    displaced.push_back(std::move(e));
  }
  h["displaced"] = std::move(displaced);
  ojson header;
  header["corpus"] = h;
  out += header.dump();
  out += '\n';
  for (const auto& t : c.triplets()) {
    ojson j;
    j["id"] = t.id;
    j["category"] = to_string(t.category);
    j["base"] = slot_to_json(t.base);
    j["positive"] = slot_to_json(t.positive);
    j["negative"] = slot_to_json(t.negative);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string corpus_hash(const Corpus& c) {
  std::string body;
  for (const auto& t : c.triplets()) {
    body += t.id;
    body += '\x1f';
    body += to_string(t.category);
    for (const auto* s : {&t.base, &t.positive, &t.negative}) {
      body += '\x1f';
      body += s->text;
    }
    body += '\x1e';
  }
  return hex64(fnv1a64(body));
}

std::vector<PairRecord> parse_pairs(std::istream& in) {
  std::vector<PairRecord> out;
  std::vector<RecordIssue> issues;
  std::set<std::string, std::less<>> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto j = ojson::parse(line);
      if (!j.is_object()) throw std::runtime_error("record must be a JSON object");
      PairRecord r;
      auto& p = r.pair;
      p.id = j.at("id").get<std::string>();
      p.s1 = {p.id + "/s1", nfc(j.at("s1").get<std::string>()), Source::Collected};
      p.s2 = {p.id + "/s2", nfc(j.at("s2").get<std::string>()), Source::Collected};
      auto label = parse_label(j.at("label").get<std::string>());
      if (!label) throw std::runtime_error("unknown label " + j["label"].get<std::string>());
      p.label = *label;
      if (trim(p.s1.text).empty() || trim(p.s2.text).empty()) {
        issues.push_back({lineno, ErrorCode::EmptyText, "pair " + p.id + " has an empty sentence"});
        continue;
      }
      if (j.contains("category")) {
        r.category = parse_category(j["category"].get<std::string>());
        if (!r.category) throw std::runtime_error("unknown category " + j["category"].get<std::string>());
      }
      if (!ids.insert(p.id).second) {
        issues.push_back({lineno, ErrorCode::DuplicateId, "duplicate pair id " + p.id});
        continue;
      }
      r.raw = j.dump();
      out.push_back(std::move(r));
    } catch (const Error& e) {
      issues.push_back({lineno, ErrorCode::MalformedRecord, e.what()});
    } catch (const std::exception& e) {
      issues.push_back({lineno, ErrorCode::MalformedRecord, e.what()});
    }
  }
  if (!issues.empty()) throw CorpusError(std::move(issues));
  return out;
}

}  // namespace vmh

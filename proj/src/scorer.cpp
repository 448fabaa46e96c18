// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmh/scorer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vmh/tagger.hpp"
#include "vmh/text.hpp"

namespace vmh {

using json = nlohmann::json;

namespace {

void check_range(double s) {
  if (!std::isfinite(s) || s < 0.0 || s > 1.0)
    throw Error(ErrorCode::RangeViolation, "score " + std::to_string(s) + " is outside [0,1]");
}

std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw Error(ErrorCode::InvalidArgument, "bad " + std::string(what) + ": " + std::string(s));
  return v;
}

}  // namespace

ScorerSpec parse_scorer_spec(std::string_view text) {
  ScorerSpec spec;
  if (text == "containment") {
    spec.kind = ScorerKind::Containment;
    spec.id = "containment";
    return spec;
  }
  if (text == "echo") {
    spec.kind = ScorerKind::Echo;
    spec.id = "echo";
    spec.semantics = ScoreSemantics::Similarity;
    return spec;
  }
  const auto colon = text.find(':');
  auto kind = text.substr(0, colon);
  if (colon == std::string_view::npos || (kind != "http" && kind != "https" && kind != "cassette"))
    throw Error(ErrorCode::InvalidArgument, "unknown scorer spec " + std::string(text));
  auto body = text.substr(colon + 1);
  // A bare URL stands for "http:URL".
  if (kind != "cassette" && body.starts_with("//")) {
    kind = "http";
    body = text;
  } else if (kind == "https") {
    throw Error(ErrorCode::InvalidArgument, "unknown scorer spec " + std::string(text));
  }
  std::vector<std::string_view> parts;
  for (std::string_view rest = body;;) {
    auto semi = rest.find(';');
    parts.push_back(rest.substr(0, semi));
    if (semi == std::string_view::npos) break;
    rest = rest.substr(semi + 1);
  }
  if (kind == "http") {
    spec.kind = ScorerKind::Http;
    spec.endpoint = std::string(parts.front());
    spec.id = "http-scorer";
  } else {
    spec.kind = ScorerKind::Cassette;
    spec.cassette = std::string(parts.front());
    spec.id = std::filesystem::path(spec.cassette).stem().string();
  }
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    const auto k = parts[i].substr(0, eq);
    const auto v = eq == std::string_view::npos ? std::string_view{} : parts[i].substr(eq + 1);
    if (k == "symmetric") spec.order_sensitive = false;
    else if (k == "id") spec.id = std::string(v);
    else if (k == "cassette") spec.cassette = std::string(v);
    else if (k == "key_env") spec.api_key_env = std::string(v);
    else if (k == "timeout_ms") spec.http.timeout = std::chrono::milliseconds(parse_count(v, "timeout_ms"));
    else if (k == "retries") spec.http.retries = static_cast<int>(parse_count(v, "retries"));
    else if (k == "semantics" && v == "similarity") spec.semantics = ScoreSemantics::Similarity;
    else if (k == "semantics" && v == "entailment") spec.semantics = ScoreSemantics::EntailmentProbability;
    else throw Error(ErrorCode::InvalidArgument, "unknown scorer option " + std::string(parts[i]));
  }
  if (spec.id.empty()) throw Error(ErrorCode::InvalidArgument, "scorer id is empty");
  return spec;
}

double Scorer::score(std::string_view s1, std::string_view s2) {
  if (!spec_.order_sensitive && s2 < s1) std::swap(s1, s2);
  const double s = raw_score(s1, s2);
  check_range(s);
  return s;
}

ContainmentScorer::ContainmentScorer() : Scorer([] {
  ScorerSpec s;
  s.kind = ScorerKind::Containment;
  s.id = "containment";
  return s;
}()) {}

double ContainmentScorer::raw_score(std::string_view s1, std::string_view s2) {
  const auto a = tokenize(s1).tokens;
  const auto b = tokenize(s2).tokens;
  if (b.empty()) return 1.0;
  return std::search(a.begin(), a.end(), b.begin(), b.end()) != a.end() ? 1.0 : 0.0;
}

EchoScorer::EchoScorer() : Scorer([] {
  ScorerSpec s;
  s.kind = ScorerKind::Echo;
  s.id = "echo";
  s.semantics = ScoreSemantics::Similarity;
  s.order_sensitive = false;
  return s;
}()) {}

double EchoScorer::raw_score(std::string_view s1, std::string_view s2) {
  if (s1 == s2) return 1.0;
  const auto ta = tokenize(s1).tokens;
  const auto tb = tokenize(s2).tokens;
  std::set<std::string> a(ta.begin(), ta.end()), b(tb.begin(), tb.end());
  std::size_t inter = 0;
  for (const auto& t : a) inter += b.count(t);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double parse_score_response(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ScorerError, std::string("scorer response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("score") || !j["score"].is_number())
    throw Error(ErrorCode::ScorerError, "scorer response lacks a numeric score");
  const double s = j["score"].get<double>();
  check_range(s);
  return s;
}

HttpScorer::HttpScorer(ScorerSpec spec) : Scorer(std::move(spec)) {
  const auto& sp = this->spec();
  if (sp.endpoint.empty() && sp.cassette.empty())
    throw Error(ErrorCode::InvalidArgument, "scorer needs an endpoint or a cassette");
  if (sp.cassette.empty() || !std::filesystem::exists(sp.cassette)) {
    if (sp.endpoint.empty()) throw Error(ErrorCode::Io, "scorer cassette not found: " + sp.cassette);
    return;
  }
  std::istringstream in(read_file(sp.cassette));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      const double s = j.at("score").get<double>();
      check_range(s);
      tape_.insert_or_assign(j.at("s1_hash").get<std::string>() + ":" + j.at("s2_hash").get<std::string>(), s);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::FormatError, sp.cassette + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::string HttpScorer::key(std::string_view s1, std::string_view s2) { return text_hash(s1) + ":" + text_hash(s2); }

std::size_t HttpScorer::recorded() const {
  std::lock_guard lock(mu_);
  return tape_.size();
}

double HttpScorer::raw_score(std::string_view s1, std::string_view s2) {
  const auto k = key(s1, s2);
  {
    std::lock_guard lock(mu_);
    if (auto it = tape_.find(k); it != tape_.end()) return it->second;
  }
  const auto& sp = spec();
  if (sp.endpoint.empty()) throw Error(ErrorCode::ScorerError, "pair not in scorer cassette " + sp.cassette);
  HttpOptions http = sp.http;
  if (http.bearer_token.empty()) http.bearer_token = env_or_empty(sp.api_key_env);
  const json body = {{"s1", s1}, {"s2", s2}};
  const double s = parse_score_response(post_json(sp.endpoint, body.dump(), http, ErrorCode::ScorerError));
  std::lock_guard lock(mu_);
  if (tape_.emplace(k, s).second && !sp.cassette.empty()) {
    std::ofstream out(sp.cassette, std::ios::app);
    out << json{{"s1_hash", text_hash(s1)}, {"s2_hash", text_hash(s2)}, {"score", s}}.dump() << '\n';
    if (!out) throw Error(ErrorCode::Io, "cannot append to " + sp.cassette);
  }
  return s;
}

std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec) {
  switch (spec.kind) {
    case ScorerKind::Containment: return std::make_unique<ContainmentScorer>();
    case ScorerKind::Echo: return std::make_unique<EchoScorer>();
    case ScorerKind::Http:
    case ScorerKind::Cassette: return std::make_unique<HttpScorer>(spec);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scorer kind");
}

}  // namespace vmh

// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <atomic>
#include <bit>
#include <cstdlib>
#include <filesystem>
#include <unistd.h>

#include "fake_server.hpp"
#include "json.hpp"
#include "vmh/scorer.hpp"
#include "vmh/simulator.hpp"
#include "vmh/text.hpp"

namespace vmh {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kFixtures = VMH_FIXTURE_DIR;

const std::string kAppreciate = "I appreciate it, that is good to know.";
const std::string kPleasure = "It is a pleasure to know that.";
const std::string kNotAppreciate = "I do not appreciate it, that is good to know.";
const std::string kClaim = "The sewing machine was built in 1804.";
const std::string kContext =
    "In 1804 , a sewing machine was built by the Englishmen Thomas Stone and James Henderson , and a machine for "
    "embroidering was constructed by John Duncan in Scotland.";
const std::string kSewer = "In 1865, an open sewer system replaced the underground sewers.";
const std::string kSewerQs = "In 3016 , an open sewer system replaced the underground sewers.";
const std::string kJordan = "In 2012, Jordan started all 16 games while recording 8.0 sacks and 54 tackles.";
const std::string kJordanWd = "Jordan started all 16 games while recording 8.0 sacks and 54 tackles.";

void expect_code(ErrorCode code, auto&& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

fs::path temp_path(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("vmh_scorer_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

TEST(ScorerSpec, Parsing) {
  auto s = parse_scorer_spec("containment");
  EXPECT_EQ(s.kind, ScorerKind::Containment);
  EXPECT_TRUE(s.order_sensitive);
  s = parse_scorer_spec("echo");
  EXPECT_EQ(s.semantics, ScoreSemantics::Similarity);
  s = parse_scorer_spec("http:http://h:9/score;id=nli;semantics=entailment;cassette=/tmp/c.jsonl;key_env=K;retries=0");
  EXPECT_EQ(s.kind, ScorerKind::Http);
  EXPECT_EQ(s.endpoint, "http://h:9/score");
  EXPECT_EQ(s.id, "nli");
  EXPECT_EQ(s.cassette, "/tmp/c.jsonl");
  EXPECT_EQ(s.api_key_env, "K");
  EXPECT_EQ(s.http.retries, 0);
  s = parse_scorer_spec("cassette:/data/recorded_nli.jsonl;symmetric;semantics=similarity");
  EXPECT_EQ(s.kind, ScorerKind::Cassette);
  EXPECT_EQ(s.id, "recorded_nli");
  EXPECT_FALSE(s.order_sensitive);
  EXPECT_EQ(s.semantics, ScoreSemantics::Similarity);
  for (const char* bad : {"nli", "http:x;bogus=1", "http:x;semantics=distance", "http:x;id=", "http:x;retries=-1"})
    expect_code(ErrorCode::InvalidArgument, [&] { parse_scorer_spec(bad); });
}

TEST(Echo, SelfScoreIsOneAndSymmetric) {
  EchoScorer s;
  EXPECT_EQ(s.score("same words here", "same words here"), 1.0);
  EXPECT_EQ(s.score("a b c", "a b d"), 0.5);
  EXPECT_EQ(s.score("a b c", "x y"), 0.0);
  EXPECT_EQ(s.score(kAppreciate, kNotAppreciate), s.score(kNotAppreciate, kAppreciate));
}

TEST(Containment, DirectionMatters) {
  ContainmentScorer s;
  EXPECT_EQ(s.score(kJordan, kJordanWd), 1.0);
  EXPECT_EQ(s.score(kJordanWd, kJordan), 0.0);
  EXPECT_EQ(s.score("a b c", "b c"), 1.0);
  EXPECT_EQ(s.score("a b c", "a c"), 0.0);
  EXPECT_EQ(s.score("a b c", ""), 1.0);
}

TEST(ParseScoreResponse, SchemaAndRange) {
  EXPECT_EQ(parse_score_response(R"({"score": 0.25})"), 0.25);
  EXPECT_EQ(parse_score_response(R"({"score": 0, "model": "m"})"), 0.0);
  EXPECT_EQ(parse_score_response(R"({"score": 1})"), 1.0);
  for (const char* bad : {"", "nope", "[]", "{}", R"({"score": "0.5"})", R"({"score": null})", R"({"value": 0.5})"})
    expect_code(ErrorCode::ScorerError, [&] { parse_score_response(bad); });
  for (const char* out : {R"({"score": 1.0000001})", R"({"score": -0.1})", R"({"score": 7})"})
    expect_code(ErrorCode::RangeViolation, [&] { parse_score_response(out); });
}

TEST(Cassette, ReplaysPinnedScoresBitExact) {
  HttpScorer s(parse_scorer_spec("cassette:" + kFixtures + "/scorer_cassette.jsonl"));
  EXPECT_EQ(s.id(), "scorer_cassette");
  EXPECT_EQ(s.recorded(), 6u);
  const std::vector<std::tuple<std::string, std::string, double>> want = {
      {kAppreciate, kPleasure, 0.9613487124443054},
      {kAppreciate, kNotAppreciate, 0.0021953582763671875},
      {kClaim, kContext, 0.8742571473121643},
      {kContext, kClaim, 0.3127749264240265},
      {kSewer, kSewerQs, 0.0105},
      {kJordan, kJordanWd, 0.9987}};
  for (const auto& [a, b, v] : want) EXPECT_EQ(std::bit_cast<std::uint64_t>(s.score(a, b)), std::bit_cast<std::uint64_t>(v));
  expect_code(ErrorCode::ScorerError, [&] { s.score(kPleasure, kAppreciate); });
}

TEST(Cassette, PinnedAccuracyOnReplayedTriplet) {
  Triplet t;
  t.id = "ne";
  t.category = MRCategory::NegaExp;
  t.base = {"ne/base", kAppreciate, Source::Collected};
  t.positive = {"ne/positive", kPleasure, Source::Generated};
  t.negative = {"ne/negative", kNotAppreciate, Source::Collected};
  HttpScorer s(parse_scorer_spec("cassette:" + kFixtures + "/scorer_cassette.jsonl;id=recorded"));
  const Corpus c({t});
  const auto fwd = evaluate_with_scorer(c, s, ScoreOrder::Forward);
  EXPECT_EQ(tally(fwd, "recorded").accuracy(), 1.0);
  EXPECT_EQ(fwd.outcomes[0].d_pos, 0.9613487124443054);
  // Reverse pairs were never recorded.
  const auto rev = evaluate_with_scorer(c, s, ScoreOrder::Reverse);
  EXPECT_EQ(rev.outcomes[0].error_code, ErrorCode::ScorerError);
  EXPECT_EQ(tally(rev, "recorded-R").errors, 1u);
}

TEST(Cassette, MissingFileAndBadLines) {
  expect_code(ErrorCode::Io, [] { HttpScorer(parse_scorer_spec("cassette:/nonexistent/x.jsonl")); });
  const auto bad = temp_path("bad.jsonl");
  write_file_atomic(bad, "{\"s1_hash\":\"a\",\"s2_hash\":\"b\",\"score\":1.5}\n");
  expect_code(ErrorCode::RangeViolation, [&] { HttpScorer(parse_scorer_spec("cassette:" + bad.string())); });
  write_file_atomic(bad, "{\"s1_hash\":\"a\"}\n");
  expect_code(ErrorCode::FormatError, [&] { HttpScorer(parse_scorer_spec("cassette:" + bad.string())); });
}

// Scores by simple rules; the body of some requests selects a misbehaving reply.
struct ScoreEndpoint {
  std::atomic<int> calls{0};
  std::string last_auth;

  void install(httplib::Server& srv) {
    srv.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
      ++calls;
      last_auth = req.get_header_value("Authorization");
      const auto body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("s1") || !body.contains("s2")) {
        res.status = 400;
        return;
      }
      const auto s1 = body["s1"].get<std::string>();
      const auto s2 = body["s2"].get<std::string>();
      if (s2 == "reply-garbage") return res.set_content("not json", "text/plain");
      if (s2 == "reply-missing") return res.set_content(R"({"label":"entailment"})", "application/json");
      if (s2 == "reply-string") return res.set_content(R"({"score":"high"})", "application/json");
      if (s2 == "reply-high") return res.set_content(R"({"score":1.5})", "application/json");
      if (s2 == "reply-negative") return res.set_content(R"({"score":-0.5})", "application/json");
      if (s2 == "reply-404") {
        res.status = 404;
        return;
      }
      // Order-sensitive: 0.9 when s2 is a prefix-free substring of s1, else 0.1.
      const double score = s1.find(s2) != std::string::npos ? 0.9 : 0.1;
      res.set_content(json{{"score", score}}.dump(), "application/json");
    });
  }
};

TEST(HttpScorer, ContractConformance) {
  testing::FakeServer fake;
  ScoreEndpoint ep;
  ep.install(fake.server());
  fake.start();
  ::setenv("VMH_TEST_SCORER_KEY", "tok", 1);
  HttpScorer s(parse_scorer_spec("http:" + fake.url("/score") + ";id=stub;key_env=VMH_TEST_SCORER_KEY;retries=0"));

  std::size_t valid = 0, scorer_errors = 0, range_errors = 0;
  std::vector<std::pair<std::string, std::string>> requests;
  for (int i = 0; i < 7; ++i) requests.emplace_back("sentence number " + std::to_string(i), "number " + std::to_string(i));
  for (int i = 0; i < 7; ++i) requests.emplace_back("short " + std::to_string(i), "much longer sentence " + std::to_string(i));
  for (const char* bad : {"reply-garbage", "reply-missing", "reply-string", "reply-404", "reply-high", "reply-negative"})
    requests.emplace_back("anything", bad);
  ASSERT_EQ(requests.size(), 20u);
  for (const auto& [a, b] : requests) {
    try {
      const double v = s.score(a, b);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      ++valid;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::RangeViolation) ++range_errors;
      else if (e.code() == ErrorCode::ScorerError) ++scorer_errors;
      else ADD_FAILURE() << e.what();
    }
  }
  EXPECT_EQ(valid, 14u);
  EXPECT_EQ(scorer_errors, 4u);
  EXPECT_EQ(range_errors, 2u);
  EXPECT_EQ(ep.last_auth, "Bearer tok");
  // Distinct queries per direction.
  EXPECT_EQ(s.score("alpha beta", "beta"), 0.9);
  EXPECT_EQ(s.score("beta", "alpha beta"), 0.1);
}

TEST(HttpScorer, RecordsThenReplaysOffline) {
  const auto cassette = temp_path("recorded.jsonl");
  fs::remove(cassette);
  std::string url;
  {
    testing::FakeServer fake;
    ScoreEndpoint ep;
    ep.install(fake.server());
    fake.start();
    url = fake.url("/score");
    HttpScorer s(parse_scorer_spec("http:" + url + ";cassette=" + cassette.string()));
    EXPECT_EQ(s.score("alpha beta", "beta"), 0.9);
    EXPECT_EQ(s.score("alpha beta", "beta"), 0.9);
    EXPECT_EQ(s.score("beta", "alpha beta"), 0.1);
    EXPECT_EQ(ep.calls, 2);
  }
  HttpScorer offline(parse_scorer_spec("cassette:" + cassette.string()));
  EXPECT_EQ(offline.recorded(), 2u);
  EXPECT_EQ(offline.score("alpha beta", "beta"), 0.9);
  EXPECT_EQ(offline.score("beta", "alpha beta"), 0.1);
}

TEST(HttpScorer, SymmetricScorersCanonicalizeOrder) {
  testing::FakeServer fake;
  ScoreEndpoint ep;
  ep.install(fake.server());
  fake.start();
  HttpScorer s(parse_scorer_spec("http:" + fake.url("/score") + ";symmetric"));
  EXPECT_EQ(s.score("alpha beta", "beta"), s.score("beta", "alpha beta"));
}

TEST(HttpScorer, UnreachableIsScorerError) {
  HttpScorer s(parse_scorer_spec("http:http://127.0.0.1:1/score;retries=0;timeout_ms=300"));
  expect_code(ErrorCode::ScorerError, [&] { s.score("a", "b"); });
}

}  // namespace
}  // namespace vmh

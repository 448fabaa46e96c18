// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <unistd.h>

#include "fake_server.hpp"
#include "json.hpp"
#include "vmh/embedding.hpp"
#include "vmh/text.hpp"

namespace vmh {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Reference FNV-1a 64, written out independently of the library.
std::uint64_t fnv_oracle(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

fs::path temp_path(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("vmh_embed_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

void expect_code(ErrorCode code, auto&& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(EmbeddingVector, RejectsNonFinite) {
  expect_code(ErrorCode::InvalidArgument, [] { EmbeddingVector({1.0, NAN}); });
  expect_code(ErrorCode::InvalidArgument, [] { EmbeddingVector({INFINITY}); });
  expect_code(ErrorCode::InvalidArgument, [] { EmbeddingVector(std::vector<double>{}); });
}

TEST(Normalize, Examples) {
  const auto n = normalize(EmbeddingVector({3.0, 4.0}));
  EXPECT_DOUBLE_EQ(n[0], 0.6);
  EXPECT_DOUBLE_EQ(n[1], 0.8);
  expect_code(ErrorCode::ZeroVector, [] { normalize(EmbeddingVector({0.0, 0.0, 0.0})); });
}

TEST(Normalize, UnitNormIdempotentScaleInvariant) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> xs(1 + rng() % 64);
    for (auto& x : xs) x = g(rng);
    const auto n = normalize(EmbeddingVector(xs));
    double sq = 0;
    for (double x : n.components()) sq += x * x;
    EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-12);
    const auto nn = normalize(n);
    for (std::size_t k = 0; k < xs.size(); ++k) EXPECT_NEAR(nn[k], n[k], 1e-15);
    const double c = std::ldexp(1.0, static_cast<int>(rng() % 40) - 20);
    auto scaled = xs;
    for (auto& x : scaled) x *= c;
    const auto ns = normalize(EmbeddingVector(scaled));
    for (std::size_t k = 0; k < xs.size(); ++k) EXPECT_NEAR(ns[k], n[k], 1e-14);
  }
  // Huge and tiny magnitudes survive without overflow.
  const auto big = normalize(EmbeddingVector({1e300, 1e300}));
  EXPECT_NEAR(big[0], std::sqrt(0.5), 1e-15);
  const auto tiny = normalize(EmbeddingVector({1e-310, 0.0}));
  EXPECT_DOUBLE_EQ(tiny[0], 1.0);
}

TEST(BagOfWords, MatchesHashOracle) {
  BagOfWordsProvider p(16);
  EXPECT_EQ(p.model_id(), "bow-16");
  const auto v = p.embed("A b, a!");
  std::vector<double> want(16, 0.0);
  for (const char* t : {"a", "b", "a"}) want[fnv_oracle(t) % 16] += 1.0;
  EXPECT_EQ(std::vector<double>(v.components().begin(), v.components().end()), want);
}

TEST(BagOfWords, OrderBlind) {
  BagOfWordsProvider p(256);
  EXPECT_EQ(p.embed("the light industry is only farming"), p.embed("the only industry is light farming"));
}

TEST(CharNgram, MatchesHashOracle) {
  CharNgramProvider p(64);
  EXPECT_EQ(p.model_id(), "char3-64");
  const auto v = p.embed("AbcD");
  std::vector<double> want(64, 0.0);
  want[fnv_oracle("abc") % 64] += 1.0;
  want[fnv_oracle("bcd") % 64] += 1.0;
  EXPECT_EQ(std::vector<double>(v.components().begin(), v.components().end()), want);

  // Code points, not bytes.
  const auto u = p.embed("\xC3\x89t\xC3\xA9");  // "Été"
  std::vector<double> want_u(64, 0.0);
  want_u[fnv_oracle("\xC3\xA9t\xC3\xA9") % 64] += 1.0;
  EXPECT_EQ(std::vector<double>(u.components().begin(), u.components().end()), want_u);

  const auto s = p.embed("ab");
  std::vector<double> want_s(64, 0.0);
  want_s[fnv_oracle("ab") % 64] += 1.0;
  EXPECT_EQ(std::vector<double>(s.components().begin(), s.components().end()), want_s);
}

TEST(CharNgram, SensitiveToOrder) {
  CharNgramProvider p(1024);
  EXPECT_NE(p.embed("the light industry is only farming"), p.embed("the only industry is light farming"));
  EXPECT_EQ(p.embed("same text"), p.embed("same text"));
}

TEST(ProviderSpec, Parsing) {
  auto s = parse_provider_spec("bow");
  EXPECT_EQ(s.kind, ProviderKind::BagOfWords);
  EXPECT_EQ(s.dimension, 256u);
  EXPECT_EQ(parse_provider_spec("char3").dimension, 1024u);
  EXPECT_EQ(parse_provider_spec("char3:512").model_id, "char3-512");
  EXPECT_EQ(parse_provider_spec("file:/tmp/v.jsonl").path, "/tmp/v.jsonl");
  s = parse_provider_spec("http://h:1/v1/embeddings;model=m;dim=8;batch=3;concurrency=2;key_env=K;retries=0");
  EXPECT_EQ(s.kind, ProviderKind::HttpApi);
  EXPECT_EQ(s.endpoint, "http://h:1/v1/embeddings");
  EXPECT_EQ(s.model_id, "m");
  EXPECT_EQ(s.dimension, 8u);
  EXPECT_EQ(s.batch_size, 3u);
  EXPECT_EQ(s.max_concurrency, 2u);
  EXPECT_EQ(s.api_key_env, "K");
  EXPECT_EQ(s.http.retries, 0);
  for (const char* bad : {"bow:0", "bow:x", "glove", "file:", "http://h;model=m", "http://h;dim=3;model=m;zz=1"})
    expect_code(ErrorCode::InvalidArgument, [&] { parse_provider_spec(bad); });
}

std::vector<VectorRecord> random_records(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1e3);
  std::vector<VectorRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> xs(dim);
    for (auto& x : xs) x = g(rng) * std::ldexp(1.0, static_cast<int>(rng() % 200) - 100);
    const std::string text = "text " + std::to_string(i);
    out.push_back({text_hash(text), text, EmbeddingVector(xs)});
  }
  return out;
}

TEST(VectorFile, RoundTripIsBitExactInBothEncodings) {
  for (auto enc : {VectorEncoding::Decimal, VectorEncoding::Binary}) {
    VectorFile f{"model-x", 7, enc, random_records(10, 7, 5)};
    f.records[3].text.reset();
    const auto back = parse_vector_file(serialize_vector_file(f));
    EXPECT_EQ(back.model_id, "model-x");
    EXPECT_EQ(back.encoding, enc);
    ASSERT_EQ(back.records.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_EQ(back.records[i].text_hash, f.records[i].text_hash);
      EXPECT_EQ(back.records[i].text, f.records[i].text);
      for (std::size_t k = 0; k < 7; ++k)
        EXPECT_EQ(std::bit_cast<std::uint64_t>(back.records[i].vector[k]),
                  std::bit_cast<std::uint64_t>(f.records[i].vector[k]));
    }
    EXPECT_EQ(serialize_vector_file(back), serialize_vector_file(f));
  }
}

TEST(VectorFile, BinaryLayoutIsLittleEndianFloat64) {
  VectorFile f{"m", 1, VectorEncoding::Binary, {{"h", std::nullopt, EmbeddingVector({1.0})}}};
  const auto text = serialize_vector_file(f);
  // 1.0 = 0x3FF0000000000000, bytes 00 00 00 00 00 00 F0 3F.
  EXPECT_NE(text.find("\"components\":\"AAAAAAAA8D8=\""), std::string::npos) << text;
}

TEST(VectorFile, Errors) {
  const std::string header = R"({"model_id":"m","dimension":2,"count":1})";
  expect_code(ErrorCode::DimensionMismatch,
              [&] { parse_vector_file(header + "\n" + R"({"text_hash":"h","components":[1,2,3]})"); });
  expect_code(ErrorCode::DimensionMismatch, [&] {
    parse_vector_file(R"({"model_id":"m","dimension":2,"count":1,"encoding":"binary"})"
                      "\n"
                      R"({"text_hash":"h","components":"AAAAAAAA8D8="})");
  });
  expect_code(ErrorCode::FormatError, [&] { parse_vector_file(header + "\n"); });
  expect_code(ErrorCode::FormatError, [&] { parse_vector_file(""); });
  expect_code(ErrorCode::FormatError, [&] { parse_vector_file("not json\n"); });
  expect_code(ErrorCode::FormatError,
              [&] { parse_vector_file(header + "\n" + R"({"text_hash":"h","components":[1,"x"]})"); });
  expect_code(ErrorCode::FormatError,
              [&] { parse_vector_file(R"({"model_id":"m","dimension":2,"count":0,"encoding":"hex"})"); });
}

TEST(VectorFileProvider, LookupAndMiss) {
  VectorFile f{"m", 2, VectorEncoding::Decimal, {{text_hash("hello"), "hello", EmbeddingVector({1.0, 2.0})}}};
  VectorFileProvider p(f);
  EXPECT_EQ(p.embed("hello"), EmbeddingVector({1.0, 2.0}));
  expect_code(ErrorCode::MissingVector, [&] { p.embed("bye"); });
  const auto batch = p.embed_batch({"hello", "bye"});
  EXPECT_TRUE(batch[0].vector);
  EXPECT_FALSE(batch[1].vector);
  EXPECT_EQ(batch[1].code, ErrorCode::MissingVector);
}

TEST(ExportVectors, DedupesInFirstSeenOrder) {
  BagOfWordsProvider p(8);
  const auto f = export_vectors(p, {"b", "a", "b", "c"});
  ASSERT_EQ(f.records.size(), 3u);
  EXPECT_EQ(f.records[0].text, "b");
  EXPECT_EQ(f.records[1].text, "a");
  EXPECT_EQ(f.records[2].text, "c");
  EXPECT_EQ(f.model_id, "bow-8");
  const auto path = temp_path("export.jsonl");
  save_vector_file(path, f);
  auto reopened = VectorFileProvider::open(path);
  EXPECT_EQ(reopened->embed("a"), p.embed("a"));
}

// Embeds each input as a one-hot-ish vector derived from its length.
struct EmbeddingsEndpoint {
  std::atomic<int> calls{0};
  std::atomic<int> max_batch{0};
  std::atomic<int> failures_left{0};
  std::string last_auth;
  std::size_t dim = 4;
  bool wrong_dimension = false;

  void install(httplib::Server& srv) {
    srv.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
      ++calls;
      last_auth = req.get_header_value("Authorization");
      if (failures_left > 0) {
        --failures_left;
        res.status = 500;
        return;
      }
      const auto body = json::parse(req.body);
      const auto& input = body.at("input");
      max_batch = std::max<int>(max_batch, static_cast<int>(input.size()));
      json data = json::array();
      // Reverse order on purpose: clients must use "index".
      for (std::size_t i = input.size(); i-- > 0;) {
        std::vector<double> v(wrong_dimension ? dim + 1 : dim, 0.5);
        v[0] = static_cast<double>(input[i].get<std::string>().size());
        data.push_back({{"index", i}, {"embedding", v}});
      }
      res.set_content(json{{"data", data}, {"model", body.at("model")}}.dump(), "application/json");
    });
  }
};

TEST(HttpEmbedding, BatchesAndSendsBearerToken) {
  testing::FakeServer fake;
  EmbeddingsEndpoint ep;
  ep.install(fake.server());
  fake.start();
  ::setenv("VMH_TEST_EMBED_KEY", "sekret", 1);
  auto spec = parse_provider_spec(fake.url("/v1/embeddings") + ";model=m;dim=4;batch=3;concurrency=2;key_env=VMH_TEST_EMBED_KEY");
  HttpEmbeddingProvider p(spec);
  std::vector<std::string> texts;
  for (int i = 0; i < 10; ++i) texts.push_back(std::string(static_cast<std::size_t>(i + 1), 'x'));
  const auto out = p.embed_batch(texts);
  for (int i = 0; i < 10; ++i) {
    ASSERT_TRUE(out[i].vector) << out[i].error;
    EXPECT_EQ((*out[i].vector)[0], i + 1.0);
  }
  EXPECT_EQ(ep.calls, 4);
  EXPECT_LE(ep.max_batch, 3);
  EXPECT_EQ(ep.last_auth, "Bearer sekret");
  // Cached now.
  EXPECT_EQ(p.embed("xx")[0], 2.0);
  EXPECT_EQ(ep.calls, 4);
}

TEST(HttpEmbedding, CassetteReplaysWithoutServer) {
  const auto cassette = temp_path("cassette.jsonl");
  fs::remove(cassette);
  std::string url;
  {
    testing::FakeServer fake;
    EmbeddingsEndpoint ep;
    ep.install(fake.server());
    fake.start();
    url = fake.url("/v1/embeddings");
    HttpEmbeddingProvider p(parse_provider_spec(url + ";model=m;dim=4;cassette=" + cassette.string()));
    EXPECT_EQ(p.embed("abc")[0], 3.0);
    EXPECT_EQ(p.embed("abcde")[0], 5.0);
  }
  ASSERT_TRUE(fs::exists(cassette));
  EXPECT_EQ(load_vector_file(cassette).records.size(), 2u);
  HttpEmbeddingProvider replay(parse_provider_spec(url + ";model=m;dim=4;retries=0;timeout_ms=500;cassette=" +
                                                   cassette.string()));
  EXPECT_EQ(replay.embed("abc")[0], 3.0);
  EXPECT_EQ(replay.embed("abcde")[0], 5.0);
  expect_code(ErrorCode::ProviderError, [&] { replay.embed("never recorded"); });
  // A cassette for another model is refused.
  expect_code(ErrorCode::DimensionMismatch,
              [&] { HttpEmbeddingProvider(parse_provider_spec(url + ";model=other;dim=4;cassette=" + cassette.string())); });
}

TEST(HttpEmbedding, RetriesServerErrorsThenGivesUp) {
  testing::FakeServer fake;
  EmbeddingsEndpoint ep;
  ep.install(fake.server());
  fake.start();
  ep.failures_left = 2;
  HttpEmbeddingProvider ok(parse_provider_spec(fake.url("/v1/embeddings") + ";model=m;dim=4;retries=2"));
  EXPECT_EQ(ok.embed("ab")[0], 2.0);
  EXPECT_EQ(ep.calls, 3);

  ep.calls = 0;
  ep.failures_left = 100;
  HttpEmbeddingProvider failing(parse_provider_spec(fake.url("/v1/embeddings") + ";model=m;dim=4;retries=1"));
  expect_code(ErrorCode::ProviderError, [&] { failing.embed("abc"); });
  EXPECT_EQ(ep.calls, 2);
}

TEST(HttpEmbedding, WrongDimensionIsReported) {
  testing::FakeServer fake;
  EmbeddingsEndpoint ep;
  ep.wrong_dimension = true;
  ep.install(fake.server());
  fake.start();
  HttpEmbeddingProvider p(parse_provider_spec(fake.url("/v1/embeddings") + ";model=m;dim=4"));
  expect_code(ErrorCode::DimensionMismatch, [&] { p.embed("abc"); });
}

TEST(HttpEmbedding, UnreachableEndpoint) {
  HttpEmbeddingProvider p(parse_provider_spec("http://127.0.0.1:1/v1/embeddings;model=m;dim=4;retries=0;timeout_ms=300"));
  expect_code(ErrorCode::ProviderError, [&] { p.embed("abc"); });
}

}  // namespace
}  // namespace vmh

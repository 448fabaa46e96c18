// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vmh/error.hpp"
#include "vmh/http.hpp"
#include "vmh/vector.hpp"

namespace vmh {

enum class ProviderKind { VectorFile, HttpApi, BagOfWords, CharNgram };

struct ProviderSpec {
  ProviderKind kind = ProviderKind::BagOfWords;
  std::string model_id;
  std::size_t dimension = 0;
  std::string path;  // VectorFile
  // HttpApi
  std::string endpoint;
  std::string api_key_env = "VMH_EMBED_API_KEY";
  std::string cassette;  // vector file recording responses; replayed on later runs
  std::size_t batch_size = 32;
  std::size_t max_concurrency = 4;
  HttpOptions http;
};

/// "bow:DIM", "char3:DIM", "file:PATH", or
/// "http:URL;model=ID;dim=N[;batch=N][;concurrency=N][;key_env=VAR][;cassette=PATH][;timeout_ms=N][;retries=N]".
/// The "http:" prefix may be dropped when URL starts with http:// or https://.
ProviderSpec parse_provider_spec(std::string_view text);

struct EmbedResult {
  std::optional<EmbeddingVector> vector;
  ErrorCode code = ErrorCode::ProviderError;
  std::string error;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual const ProviderSpec& spec() const = 0;
  const std::string& model_id() const { return spec().model_id; }
  std::size_t dimension() const { return spec().dimension; }

  /// Thread-safe. Throws MissingVector, ProviderError or DimensionMismatch.
  virtual EmbeddingVector embed(std::string_view text) = 0;
  /// Per-text results; the default embeds one by one.
  virtual std::vector<EmbedResult> embed_batch(const std::vector<std::string>& texts);
};

/// Hashed bag of words: count of tokens t with FNV-1a64(t) mod D.
class BagOfWordsProvider final : public EmbeddingProvider {
 public:
  explicit BagOfWordsProvider(std::size_t dimension);
  const ProviderSpec& spec() const override { return spec_; }
  EmbeddingVector embed(std::string_view text) override;

 private:
  ProviderSpec spec_;
};

/// Hashed character trigrams over the lowercased raw text (code points).
class CharNgramProvider final : public EmbeddingProvider {
 public:
  explicit CharNgramProvider(std::size_t dimension, std::size_t n = 3);
  const ProviderSpec& spec() const override { return spec_; }
  EmbeddingVector embed(std::string_view text) override;

 private:
  ProviderSpec spec_;
  std::size_t n_;
};

/// One stored vector, keyed by the FNV-1a64 hash of the NFC text.
struct VectorRecord {
  std::string text_hash;
  std::optional<std::string> text;
  EmbeddingVector vector;
};

enum class VectorEncoding { Decimal, Binary };

/// Parsed vector file: header {model_id, dimension, count, encoding} then
/// one record {text_hash, text?, components} per line. Decimal components
/// are JSON numbers in shortest round-trip form; binary components are
/// base64 of little-endian IEEE-754 float64.
struct VectorFile {
  std::string model_id;
  std::size_t dimension = 0;
  VectorEncoding encoding = VectorEncoding::Decimal;
  std::vector<VectorRecord> records;
};

/// Throws FormatError or DimensionMismatch.
VectorFile parse_vector_file(std::string_view contents);
VectorFile load_vector_file(const std::filesystem::path& path);
std::string serialize_vector_file(const VectorFile& file);
void save_vector_file(const std::filesystem::path& path, const VectorFile& file);

/// Lookup-only provider over a vector file.
class VectorFileProvider final : public EmbeddingProvider {
 public:
  explicit VectorFileProvider(VectorFile file, std::string path = {});
  static std::unique_ptr<VectorFileProvider> open(const std::filesystem::path& path);
  const ProviderSpec& spec() const override { return spec_; }
  EmbeddingVector embed(std::string_view text) override;
  std::size_t size() const noexcept { return by_hash_.size(); }

 private:
  ProviderSpec spec_;
  std::unordered_map<std::string, EmbeddingVector> by_hash_;
};

/// OpenAI-compatible embeddings endpoint: {model, input: [..]} ->
/// {data: [{index, embedding}]}. Requests are split into batches and sent
/// with bounded concurrency. With a cassette, known texts are replayed and
/// new responses are appended to it.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(ProviderSpec spec);
  const ProviderSpec& spec() const override { return spec_; }
  EmbeddingVector embed(std::string_view text) override;
  std::vector<EmbedResult> embed_batch(const std::vector<std::string>& texts) override;

 private:
  std::vector<EmbeddingVector> request(const std::vector<std::string>& batch);
  void record(const std::vector<std::string>& texts, const std::vector<EmbeddingVector>& vectors);

  ProviderSpec spec_;
  std::mutex mu_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
  VectorFile cassette_;
};

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderSpec& spec);

inline EmbeddingVector embed(std::string_view text, EmbeddingProvider& p) { return p.embed(text); }

/// Materializes vectors for `texts` (deduplicated, first-seen order).
VectorFile export_vectors(EmbeddingProvider& p, const std::vector<std::string>& texts, bool include_text = true);

}  // namespace vmh

// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmh/embedding.hpp"

#include <openssl/evp.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "vmh/tagger.hpp"
#include "vmh/text.hpp"

namespace vmh {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

EmbeddingVector::EmbeddingVector(std::vector<double> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::InvalidArgument, "embedding vector has no components");
  for (double x : components_)
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "embedding vector has a non-finite component");
}

EmbeddingVector normalize(const EmbeddingVector& v) {
  double scale = 0.0;
  for (double x : v.components()) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) throw Error(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  double sq = 0.0;
  for (double x : v.components()) sq += (x / scale) * (x / scale);
  const double norm = scale * std::sqrt(sq);
  std::vector<double> out(v.dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] / norm;
  return EmbeddingVector(std::move(out));
}

namespace {

std::size_t parse_size(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw Error(ErrorCode::InvalidArgument, "bad " + std::string(what) + ": " + std::string(s));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string lowercase(std::string_view text) {
  std::string out;
  const auto len = static_cast<int32_t>(text.size());
  for (int32_t i = 0; i < len;) {
    UChar32 c;
    U8_NEXT(text.data(), i, len, c);
    if (c < 0) c = 0xFFFD;
    c = u_tolower(c);
    char buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, c);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

std::string encode_base64(std::span<const double> xs) {
  std::string raw(xs.size() * sizeof(double), '\0');
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(xs[i]);
    for (int b = 0; b < 8; ++b) raw[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
  }
  std::string out(4 * ((raw.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(raw.data()), static_cast<int>(raw.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<double> decode_base64(std::string_view b64, std::size_t dimension) {
  if (b64.size() % 4 != 0) throw Error(ErrorCode::FormatError, "base64 length is not a multiple of 4");
  std::string raw(b64.size() / 4 * 3, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(raw.data()),
                                reinterpret_cast<const unsigned char*>(b64.data()), static_cast<int>(b64.size()));
  if (n < 0) throw Error(ErrorCode::FormatError, "invalid base64 components");
  std::size_t padding = 0;
  if (!b64.empty() && b64.back() == '=') ++padding;
  if (b64.size() > 1 && b64[b64.size() - 2] == '=') ++padding;
  const std::size_t bytes = static_cast<std::size_t>(n) - padding;
  if (bytes % 8 != 0) throw Error(ErrorCode::FormatError, "binary components are not whole float64 values");
  if (bytes / 8 != dimension)
    throw Error(ErrorCode::DimensionMismatch,
                "record has " + std::to_string(bytes / 8) + " components, header says " + std::to_string(dimension));
  std::vector<double> out(dimension);
  for (std::size_t i = 0; i < dimension; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(raw[i * 8 + b])) << (8 * b);
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

void check_dimension(const EmbeddingVector& v, std::size_t want, std::string_view model) {
  if (want != 0 && v.dimension() != want)
    throw Error(ErrorCode::DimensionMismatch, std::string(model) + " returned dimension " +
                                                  std::to_string(v.dimension()) + ", expected " + std::to_string(want));
}

}  // namespace

ProviderSpec parse_provider_spec(std::string_view text) {
  ProviderSpec spec;
  const auto colon = text.find(':');
  auto kind = text.substr(0, colon);
  auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  // A bare URL stands for "http:URL".
  if ((kind == "http" || kind == "https") && rest.starts_with("//")) {
    kind = "http";
    rest = text;
  }
  if (kind == "bow" || kind == "char3") {
    spec.kind = kind == "bow" ? ProviderKind::BagOfWords : ProviderKind::CharNgram;
    spec.dimension = rest.empty() ? (kind == "bow" ? 256 : 1024) : parse_size(rest, "dimension");
    if (spec.dimension == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    spec.model_id = std::string(kind) + "-" + std::to_string(spec.dimension);
    return spec;
  }
  if (kind == "file") {
    if (rest.empty()) throw Error(ErrorCode::InvalidArgument, "file provider needs a path");
    spec.kind = ProviderKind::VectorFile;
    spec.path = std::string(rest);
    return spec;
  }
  if (kind == "http") {
    spec.kind = ProviderKind::HttpApi;
    auto parts = split(rest, ';');
    spec.endpoint = std::string(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto eq = parts[i].find('=');
      if (eq == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "expected key=value in provider spec");
      auto key = parts[i].substr(0, eq);
      auto val = parts[i].substr(eq + 1);
      if (key == "model") spec.model_id = std::string(val);
      else if (key == "dim") spec.dimension = parse_size(val, "dim");
      else if (key == "batch") spec.batch_size = parse_size(val, "batch");
      else if (key == "concurrency") spec.max_concurrency = parse_size(val, "concurrency");
      else if (key == "key_env") spec.api_key_env = std::string(val);
      else if (key == "cassette") spec.cassette = std::string(val);
      else if (key == "timeout_ms") spec.http.timeout = std::chrono::milliseconds(parse_size(val, "timeout_ms"));
      else if (key == "retries") spec.http.retries = static_cast<int>(parse_size(val, "retries"));
      else throw Error(ErrorCode::InvalidArgument, "unknown provider option " + std::string(key));
    }
    if (spec.endpoint.empty() || spec.model_id.empty() || spec.dimension == 0)
      throw Error(ErrorCode::InvalidArgument, "http provider needs URL, model= and dim=");
    spec.batch_size = std::max<std::size_t>(1, spec.batch_size);
    spec.max_concurrency = std::max<std::size_t>(1, spec.max_concurrency);
    return spec;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown provider kind in " + std::string(text));
}

std::vector<EmbedResult> EmbeddingProvider::embed_batch(const std::vector<std::string>& texts) {
  std::vector<EmbedResult> out(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    try {
      out[i].vector = embed(texts[i]);
    } catch (const Error& e) {
      out[i].code = e.code();
      out[i].error = e.what();
    }
  }
  return out;
}

BagOfWordsProvider::BagOfWordsProvider(std::size_t dimension) {
  if (dimension == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  spec_.kind = ProviderKind::BagOfWords;
  spec_.dimension = dimension;
  spec_.model_id = "bow-" + std::to_string(dimension);
}

EmbeddingVector BagOfWordsProvider::embed(std::string_view text) {
  std::vector<double> v(spec_.dimension, 0.0);
  for (const auto& tok : tokenize(text).tokens) v[fnv1a64(tok) % spec_.dimension] += 1.0;
  return EmbeddingVector(std::move(v));
}

CharNgramProvider::CharNgramProvider(std::size_t dimension, std::size_t n) : n_(n) {
  if (dimension == 0 || n == 0) throw Error(ErrorCode::InvalidArgument, "dimension and n must be positive");
  spec_.kind = ProviderKind::CharNgram;
  spec_.dimension = dimension;
  spec_.model_id = "char" + std::to_string(n) + "-" + std::to_string(dimension);
}

EmbeddingVector CharNgramProvider::embed(std::string_view text) {
  const std::string lower = lowercase(text);
  std::vector<std::size_t> starts;  // byte offset of each code point
  const auto len = static_cast<int32_t>(lower.size());
  for (int32_t i = 0; i < len;) {
    starts.push_back(static_cast<std::size_t>(i));
    U8_FWD_1(lower.data(), i, len);
  }
  starts.push_back(lower.size());
  const std::size_t cps = starts.size() - 1;
  std::vector<double> v(spec_.dimension, 0.0);
  auto add = [&](std::size_t from, std::size_t to) {
    v[fnv1a64(std::string_view(lower).substr(starts[from], starts[to] - starts[from])) % spec_.dimension] += 1.0;
  };
  if (cps == 0) return EmbeddingVector(std::move(v));
  if (cps < n_) {
    add(0, cps);
  } else {
    for (std::size_t i = 0; i + n_ <= cps; ++i) add(i, i + n_);
  }
  return EmbeddingVector(std::move(v));
}

VectorFile parse_vector_file(std::string_view contents) {
  std::istringstream in{std::string(contents)};
  std::string line;
  VectorFile file;
  std::size_t lineno = 0;
  std::optional<std::size_t> declared_count;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::FormatError, "vector file line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      if (!declared_count) {
        file.model_id = j.at("model_id").get<std::string>();
        file.dimension = j.at("dimension").get<std::size_t>();
        declared_count = j.at("count").get<std::size_t>();
        const auto enc = j.value("encoding", "decimal");
        if (enc == "decimal") file.encoding = VectorEncoding::Decimal;
        else if (enc == "binary") file.encoding = VectorEncoding::Binary;
        else throw Error(ErrorCode::FormatError, "unknown encoding " + enc);
        if (file.dimension == 0) throw Error(ErrorCode::FormatError, "dimension must be positive");
        continue;
      }
      VectorRecord rec;
      rec.text_hash = j.at("text_hash").get<std::string>();
      if (j.contains("text") && !j["text"].is_null()) rec.text = nfc(j["text"].get<std::string>());
      const auto& comps = j.at("components");
      std::vector<double> xs;
      if (comps.is_string()) {
        xs = decode_base64(comps.get<std::string>(), file.dimension);
      } else {
        xs = comps.get<std::vector<double>>();
        if (xs.size() != file.dimension)
          throw Error(ErrorCode::DimensionMismatch, "record has " + std::to_string(xs.size()) +
                                                        " components, header says " + std::to_string(file.dimension));
      }
      rec.vector = EmbeddingVector(std::move(xs));
      file.records.push_back(std::move(rec));
    } catch (const Error& e) {
      throw Error(e.code() == ErrorCode::InvalidArgument ? ErrorCode::FormatError : e.code(),
                  "vector file line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::FormatError, "vector file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!declared_count) throw Error(ErrorCode::FormatError, "vector file has no header");
  if (*declared_count != file.records.size())
    throw Error(ErrorCode::FormatError, "vector file header count " + std::to_string(*declared_count) +
                                            " but " + std::to_string(file.records.size()) + " records");
  return file;
}

VectorFile load_vector_file(const std::filesystem::path& path) { return parse_vector_file(read_file(path)); }

std::string serialize_vector_file(const VectorFile& file) {
  std::string out;
  ojson h;
  h["model_id"] = file.model_id;
  h["dimension"] = file.dimension;
  h["count"] = file.records.size();
  h["encoding"] = file.encoding == VectorEncoding::Binary ? "binary" : "decimal";
  out += h.dump() + '\n';
  for (const auto& r : file.records) {
    if (r.vector.dimension() != file.dimension)
      throw Error(ErrorCode::DimensionMismatch, "record " + r.text_hash + " has the wrong dimension");
    ojson j;
    j["text_hash"] = r.text_hash;
    if (r.text) j["text"] = *r.text;
    if (file.encoding == VectorEncoding::Binary)
      j["components"] = encode_base64(r.vector.components());
    else
      j["components"] = std::vector<double>(r.vector.components().begin(), r.vector.components().end());
    out += j.dump() + '\n';
  }
  return out;
}

void save_vector_file(const std::filesystem::path& path, const VectorFile& file) {
  write_file_atomic(path, serialize_vector_file(file));
}

VectorFileProvider::VectorFileProvider(VectorFile file, std::string path) {
  spec_.kind = ProviderKind::VectorFile;
  spec_.model_id = file.model_id;
  spec_.dimension = file.dimension;
  spec_.path = std::move(path);
  for (auto& r : file.records) by_hash_.insert_or_assign(r.text_hash, std::move(r.vector));
}

std::unique_ptr<VectorFileProvider> VectorFileProvider::open(const std::filesystem::path& path) {
  return std::make_unique<VectorFileProvider>(load_vector_file(path), path.string());
}

EmbeddingVector VectorFileProvider::embed(std::string_view text) {
  auto it = by_hash_.find(text_hash(text));
  if (it == by_hash_.end())
    throw Error(ErrorCode::MissingVector, "no vector for text in " + spec_.model_id + ": " + std::string(text));
  return it->second;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(ProviderSpec spec) : spec_(std::move(spec)) {
  if (spec_.http.bearer_token.empty()) spec_.http.bearer_token = env_or_empty(spec_.api_key_env);
  cassette_.model_id = spec_.model_id;
  cassette_.dimension = spec_.dimension;
  if (!spec_.cassette.empty() && std::filesystem::exists(spec_.cassette)) {
    cassette_ = load_vector_file(spec_.cassette);
    if (cassette_.model_id != spec_.model_id || cassette_.dimension != spec_.dimension)
      throw Error(ErrorCode::DimensionMismatch, "cassette " + spec_.cassette + " belongs to " + cassette_.model_id);
    for (const auto& r : cassette_.records) cache_.insert_or_assign(r.text_hash, r.vector);
  }
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::request(const std::vector<std::string>& batch) {
  const json body = {{"model", spec_.model_id}, {"input", batch}};
  const auto resp = post_json(spec_.endpoint, body.dump(), spec_.http, ErrorCode::ProviderError);
  std::vector<std::optional<EmbeddingVector>> slots(batch.size());
  try {
    const auto j = json::parse(resp);
    for (const auto& item : j.at("data")) {
      const auto idx = item.at("index").get<std::size_t>();
      if (idx >= batch.size()) throw Error(ErrorCode::ProviderError, "response index out of range");
      EmbeddingVector v(item.at("embedding").get<std::vector<double>>());
      check_dimension(v, spec_.dimension, spec_.model_id);
      slots[idx] = std::move(v);
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ProviderError, std::string("bad embeddings response: ") + e.what());
  }
  std::vector<EmbeddingVector> out;
  for (auto& s : slots) {
    if (!s) throw Error(ErrorCode::ProviderError, "embeddings response is missing an index");
    out.push_back(std::move(*s));
  }
  return out;
}

void HttpEmbeddingProvider::record(const std::vector<std::string>& texts, const std::vector<EmbeddingVector>& vectors) {
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto h = text_hash(texts[i]);
    if (cache_.insert_or_assign(h, vectors[i]).second)
      cassette_.records.push_back({h, texts[i], vectors[i]});
  }
}

EmbeddingVector HttpEmbeddingProvider::embed(std::string_view text) {
  auto results = embed_batch({std::string(text)});
  if (!results.front().vector) throw Error(results.front().code, results.front().error);
  return std::move(*results.front().vector);
}

std::vector<EmbedResult> HttpEmbeddingProvider::embed_batch(const std::vector<std::string>& texts) {
  std::vector<EmbedResult> out(texts.size());
  std::vector<std::size_t> missing;
  {
    std::lock_guard lock(mu_);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (auto it = cache_.find(text_hash(texts[i])); it != cache_.end())
        out[i].vector = it->second;
      else
        missing.push_back(i);
    }
  }
  const std::size_t n_batches = (missing.size() + spec_.batch_size - 1) / spec_.batch_size;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b = next++; b < n_batches; b = next++) {
      std::vector<std::string> batch;
      const std::size_t lo = b * spec_.batch_size;
      const std::size_t hi = std::min(missing.size(), lo + spec_.batch_size);
      for (std::size_t k = lo; k < hi; ++k) batch.push_back(texts[missing[k]]);
      try {
        auto vectors = request(batch);
        record(batch, vectors);
        for (std::size_t k = lo; k < hi; ++k) out[missing[k]].vector = std::move(vectors[k - lo]);
      } catch (const Error& e) {
        for (std::size_t k = lo; k < hi; ++k) {
          out[missing[k]].code = e.code();
          out[missing[k]].error = e.what();
        }
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n_threads = std::min(spec_.max_concurrency, n_batches);
    for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
  }
  if (!spec_.cassette.empty() && !missing.empty()) {
    std::lock_guard lock(mu_);
    save_vector_file(spec_.cassette, cassette_);
  }
  return out;
}

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderSpec& spec) {
  switch (spec.kind) {
    case ProviderKind::BagOfWords: return std::make_unique<BagOfWordsProvider>(spec.dimension);
    case ProviderKind::CharNgram: return std::make_unique<CharNgramProvider>(spec.dimension);
    case ProviderKind::VectorFile: return VectorFileProvider::open(spec.path);
    case ProviderKind::HttpApi: return std::make_unique<HttpEmbeddingProvider>(spec);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown provider kind");
}

VectorFile export_vectors(EmbeddingProvider& p, const std::vector<std::string>& texts, bool include_text) {
  std::vector<std::string> unique;
  std::unordered_map<std::string, bool> seen;
  for (const auto& t : texts)
    if (seen.emplace(text_hash(t), true).second) unique.push_back(t);
  auto results = p.embed_batch(unique);
  VectorFile file;
  file.model_id = p.model_id();
  file.dimension = p.dimension();
  for (std::size_t i = 0; i < unique.size(); ++i) {
    if (!results[i].vector) throw Error(results[i].code, results[i].error);
    check_dimension(*results[i].vector, file.dimension, file.model_id);
    file.records.push_back({text_hash(unique[i]),
                            include_text ? std::optional<std::string>(unique[i]) : std::nullopt,
                            std::move(*results[i].vector)});
  }
  return file;
}

}  // namespace vmh

// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "vmh/http.hpp"

namespace vmh {

enum class GenerationKind { PositiveRewrite, NegativeEvidenceRemoval };

/// Template ids of the bundled prompt files (prompts/<id>.txt).
inline constexpr std::string_view kPositiveRewriteTemplate = "positive_rewrite.v1";
inline constexpr std::string_view kEvidenceRemovalTemplate = "evidence_removal.v1";

struct GenerationRequest {
  GenerationKind kind = GenerationKind::PositiveRewrite;
  std::string template_id;
  std::map<std::string, std::string> variables;  // "base" or "claim" + "context"
  std::uint64_t seed = 0;
};

/// Throws InvalidArgument when the kind's inputs are missing.
void check_request(const GenerationRequest& req);

/// Bundled template with {{name}} placeholders substituted.
std::string render_prompt(const GenerationRequest& req);

class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  /// Generated text. Throws Error(ClientError) on transport/protocol failure.
  virtual std::string generate(const GenerationRequest& req) = 0;
};

struct HttpGeneratorConfig {
  std::string endpoint;
  std::string api_key_env = "VMH_GEN_API_KEY";
  HttpOptions http;
};

/// POST {template_id, variables, seed, prompt} -> {text}. Thread-safe.
class HttpTextGenerator final : public TextGenerator {
 public:
  explicit HttpTextGenerator(HttpGeneratorConfig cfg);
  std::string generate(const GenerationRequest& req) override;

 private:
  HttpGeneratorConfig cfg_;
};

/// Replays recorded responses. Records are JSON lines
/// {template_id, variables, text}; lookup ignores the seed. Unknown
/// requests throw ClientError.
class RecordedTextGenerator final : public TextGenerator {
 public:
  static RecordedTextGenerator from_text(std::string_view lines);
  static RecordedTextGenerator from_file(const std::string& path);

  void add(const std::string& template_id, const std::map<std::string, std::string>& variables, std::string text);
  std::string generate(const GenerationRequest& req) override;
  std::size_t size() const noexcept { return responses_.size(); }

 private:
  static std::string key(const std::string& template_id, const std::map<std::string, std::string>& variables);
  std::map<std::string, std::string> responses_;
};

}  // namespace vmh

// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmh/generation.hpp"

#include <sstream>

#include "json.hpp"
#include "vmh/resources.hpp"
#include "vmh/text.hpp"

namespace vmh {

using json = nlohmann::json;

void check_request(const GenerationRequest& req) {
  auto need = [&](const char* name) {
    auto it = req.variables.find(name);
    if (it == req.variables.end() || trim(it->second).empty())
      throw Error(ErrorCode::InvalidArgument, std::string("generation request lacks ") + name);
  };
  if (req.kind == GenerationKind::PositiveRewrite) {
    need("base");
  } else {
    need("claim");
    need("context");
  }
  if (resources::get(req.template_id).empty())
    throw Error(ErrorCode::InvalidArgument, "unknown prompt template " + req.template_id);
}

std::string render_prompt(const GenerationRequest& req) {
  std::string out(resources::get(req.template_id));
  for (const auto& [name, value] : req.variables) {
    const std::string placeholder = "{{" + name + "}}";
    for (auto pos = out.find(placeholder); pos != std::string::npos; pos = out.find(placeholder, pos + value.size()))
      out.replace(pos, placeholder.size(), value);
  }
  return out;
}

HttpTextGenerator::HttpTextGenerator(HttpGeneratorConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.endpoint.empty()) throw Error(ErrorCode::InvalidArgument, "generation endpoint is empty");
  if (cfg_.http.bearer_token.empty()) cfg_.http.bearer_token = env_or_empty(cfg_.api_key_env);
}

std::string HttpTextGenerator::generate(const GenerationRequest& req) {
  json body = {{"template_id", req.template_id},
               {"variables", req.variables},
               {"seed", req.seed},
               {"prompt", render_prompt(req)}};
  const auto resp = post_json(cfg_.endpoint, body.dump(), cfg_.http, ErrorCode::ClientError);
  try {
    auto j = json::parse(resp);
    return j.at("text").get<std::string>();
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ClientError, std::string("bad generation response: ") + e.what());
  }
}

std::string RecordedTextGenerator::key(const std::string& template_id,
                                       const std::map<std::string, std::string>& variables) {
  return template_id + '\x1f' + json(variables).dump();
}

void RecordedTextGenerator::add(const std::string& template_id, const std::map<std::string, std::string>& variables,
                                std::string text) {
  responses_[key(template_id, variables)] = std::move(text);
}

RecordedTextGenerator RecordedTextGenerator::from_text(std::string_view lines) {
  RecordedTextGenerator gen;
  std::istringstream in{std::string(lines)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto j = json::parse(line);
      std::map<std::string, std::string> vars;
      for (const auto& [k, v] : j.at("variables").items()) vars[k] = nfc(v.get<std::string>());
      gen.add(j.at("template_id").get<std::string>(), vars, j.at("text").get<std::string>());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::FormatError, "recorded responses line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return gen;
}

RecordedTextGenerator RecordedTextGenerator::from_file(const std::string& path) { return from_text(read_file(path)); }

std::string RecordedTextGenerator::generate(const GenerationRequest& req) {
  auto it = responses_.find(key(req.template_id, req.variables));
  if (it == responses_.end())
    throw Error(ErrorCode::ClientError, "no recorded response for " + req.template_id + " request");
  return it->second;
}

}  // namespace vmh

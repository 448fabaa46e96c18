// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmh/vmh.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vmh/builder.hpp"
#include "vmh/corpus.hpp"
#include "vmh/embedding.hpp"
#include "vmh/generation.hpp"
#include "vmh/report.hpp"
#include "vmh/scorer.hpp"
#include "vmh/simulator.hpp"
#include "vmh/tagger.hpp"
#include "vmh/text.hpp"

struct vmh_corpus {
  vmh::Corpus corpus;
  std::string hash;
};

struct vmh_provider {
  std::shared_ptr<vmh::EmbeddingProvider> provider;
};

struct vmh_scorer {
  std::unique_ptr<vmh::Scorer> scorer;
};

struct vmh_report {
  vmh::EvalReport report;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_text;

vmh_status to_status(vmh::ErrorCode c) { return static_cast<vmh_status>(static_cast<int>(c) + 1); }

template <typename F>
vmh_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return VMH_OK;
  } catch (const vmh::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return VMH_E_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VMH_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return VMH_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw vmh::Error(vmh::ErrorCode::InvalidArgument, what);
}

vmh_corpus* wrap(vmh::Corpus c) {
  auto* h = new vmh_corpus{std::move(c), {}};
  h->hash = vmh::corpus_hash(h->corpus);
  return h;
}

}  // namespace

extern "C" {

const char* vmh_version(void) { return "0.3.0"; }

const char* vmh_status_name(vmh_status s) {
  if (s == VMH_OK) return "Ok";
  if (s == VMH_E_INTERNAL) return "Internal";
  if (s > VMH_OK && s < VMH_E_INTERNAL) {
    static const auto names = [] {
      std::vector<std::string> v;
      for (int i = 0; i < VMH_E_INTERNAL - 1; ++i) v.emplace_back(vmh::to_string(static_cast<vmh::ErrorCode>(i)));
      return v;
    }();
    return names[static_cast<std::size_t>(s) - 1].c_str();
  }
  return "Unknown";
}

const char* vmh_last_error(void) { return g_last_error.c_str(); }

const char* vmh_category_name(int category) {
  if (category < 0 || category >= VMH_CATEGORY_COUNT) return nullptr;
  return vmh::to_string(static_cast<vmh::MRCategory>(category)).data();
}

int vmh_category_index(const char* name) {
  if (!name) return -1;
  auto c = vmh::parse_category(name);
  return c ? static_cast<int>(*c) : -1;
}

vmh_status vmh_corpus_load(const char* path, vmh_corpus** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = wrap(vmh::load_corpus(path));
  });
}

vmh_status vmh_corpus_save(const vmh_corpus* c, const char* path) {
  return guard([&] {
    require(c && path, "null argument");
    vmh::write_file_atomic(path, vmh::serialize_corpus(c->corpus));
  });
}

void vmh_corpus_free(vmh_corpus* c) { delete c; }
size_t vmh_corpus_size(const vmh_corpus* c) { return c ? c->corpus.size() : 0; }
const char* vmh_corpus_name(const vmh_corpus* c) { return c ? c->corpus.metadata().name.c_str() : ""; }
const char* vmh_corpus_hash(const vmh_corpus* c) { return c ? c->hash.c_str() : ""; }

void vmh_corpus_composition(const vmh_corpus* c, size_t counts[VMH_CATEGORY_COUNT]) {
  if (!c || !counts) return;
  const auto comp = c->corpus.composition();
  for (std::size_t i = 0; i < vmh::kCategoryCount; ++i) counts[i] = comp[i];
}

vmh_status vmh_corpus_nonmetamorphic(const vmh_corpus* c, vmh_corpus** out) {
  return guard([&] {
    require(c && out, "null argument");
    *out = wrap(vmh::make_nonmetamorphic(c->corpus));
  });
}

size_t vmh_corpus_unpaired_count(const vmh_corpus* c) { return c ? c->corpus.metadata().unpaired.size() : 0; }

const char* vmh_corpus_unpaired_id(const vmh_corpus* c, size_t i) {
  if (!c || i >= c->corpus.metadata().unpaired.size()) return nullptr;
  return c->corpus.metadata().unpaired[i].c_str();
}

vmh_status vmh_tag_pair(const char* s1, const char* s2, const char* label, int* category) {
  return guard([&] {
    require(s1 && s2 && label && category, "null argument");
    auto l = vmh::parse_label(label);
    if (!l) throw vmh::Error(vmh::ErrorCode::InvalidArgument, std::string("unknown label ") + label);
    vmh::SentencePair p;
    p.id = "pair";
    p.s1 = {"pair/s1", vmh::nfc(s1), vmh::Source::Collected};
    p.s2 = {"pair/s2", vmh::nfc(s2), vmh::Source::Collected};
    p.label = *l;
    *category = static_cast<int>(vmh::tag_pair(p));
  });
}

vmh_status vmh_tag_file(const char* in, const char* out, const char* lexicon_path, size_t counts[VMH_CATEGORY_COUNT]) {
  return guard([&] {
    require(in && out, "null argument");
    std::optional<vmh::LexiconTagger> custom;
    if (lexicon_path) custom = vmh::LexiconTagger::from_file(lexicon_path);
    const vmh::PosTagger& tagger = custom ? static_cast<const vmh::PosTagger&>(*custom) : vmh::LexiconTagger::bundled();
    std::istringstream input(vmh::read_file(in));
    const auto records = vmh::parse_pairs(input);
    std::string text;
    std::size_t local[vmh::kCategoryCount] = {};
    for (const auto& r : records) {
      const auto cat = vmh::tag_pair(r.pair, tagger);
      ++local[static_cast<std::size_t>(cat)];
      auto j = nlohmann::ordered_json::parse(r.raw);
      j["category"] = vmh::to_string(cat);
      text += j.dump() + '\n';
    }
    vmh::write_file_atomic(out, text);
    if (counts)
      for (std::size_t i = 0; i < vmh::kCategoryCount; ++i) counts[i] = local[i];
  });
}

void vmh_build_options_init(vmh_build_options* opts) {
  if (!opts) return;
  *opts = vmh_build_options{};
  opts->retries = -1;
}

vmh_status vmh_build_file(const char* tagged_path, const char* out_path, const vmh_build_options* opts,
                          vmh_build_stats* stats) {
  return guard([&] {
    require(tagged_path && out_path && opts, "null argument");
    const bool stub = opts->stub_path && *opts->stub_path;
    const bool live = opts->gen_endpoint && *opts->gen_endpoint;
    if (stub == live) throw vmh::Error(vmh::ErrorCode::InvalidArgument, "exactly one of stub path or endpoint is required");
    std::unique_ptr<vmh::TextGenerator> gen;
    if (stub) {
      gen = std::make_unique<vmh::RecordedTextGenerator>(vmh::RecordedTextGenerator::from_file(opts->stub_path));
    } else {
      vmh::HttpGeneratorConfig cfg;
      cfg.endpoint = opts->gen_endpoint;
      if (opts->api_key_env) cfg.api_key_env = opts->api_key_env;
      if (opts->timeout_ms) cfg.http.timeout = std::chrono::milliseconds(opts->timeout_ms);
      if (opts->retries >= 0) cfg.http.retries = opts->retries;
      gen = std::make_unique<vmh::HttpTextGenerator>(cfg);
    }
    std::istringstream input(vmh::read_file(tagged_path));
    const auto records = vmh::parse_pairs(input);
    vmh::BuildOptions bo;
    bo.seed.seed = opts->seed;
    if (opts->max_in_flight) bo.max_in_flight = opts->max_in_flight;
    bo.corpus_name = opts->corpus_name ? std::string(opts->corpus_name)
                                       : std::filesystem::path(tagged_path).stem().string();
    const auto result = vmh::build_triplets(records, *gen, bo);
    vmh::write_file_atomic(out_path, vmh::serialize_corpus(result.corpus));
    if (opts->on_failure)
      for (const auto& f : result.failures)
        opts->on_failure(f.pair_id.c_str(), to_status(f.code), f.detail.c_str(), opts->user);
    if (stats) {
      stats->attempted = result.attempted;
      stats->built = result.corpus.size();
      stats->failed = result.failures.size();
      stats->skipped = result.skipped;
    }
  });
}

vmh_status vmh_provider_create(const char* spec, vmh_provider** out) {
  return guard([&] {
    require(spec && out, "null argument");
    *out = new vmh_provider{vmh::make_provider(vmh::parse_provider_spec(spec))};
  });
}

void vmh_provider_free(vmh_provider* p) { delete p; }
const char* vmh_provider_model_id(const vmh_provider* p) { return p ? p->provider->model_id().c_str() : ""; }
size_t vmh_provider_dimension(const vmh_provider* p) { return p ? p->provider->dimension() : 0; }

vmh_status vmh_provider_embed(vmh_provider* p, const char* text, double* out, size_t cap) {
  return guard([&] {
    require(p && text && out, "null argument");
    const auto v = p->provider->embed(vmh::nfc(text));
    if (v.dimension() > cap)
      throw vmh::Error(vmh::ErrorCode::DimensionMismatch, "output buffer holds " + std::to_string(cap) +
                                                              " values, vector has " + std::to_string(v.dimension()));
    std::copy(v.components().begin(), v.components().end(), out);
  });
}

vmh_status vmh_provider_export(vmh_provider* p, const vmh_corpus* c, const char* path, int binary, size_t* count) {
  return guard([&] {
    require(p && c && path, "null argument");
    std::vector<std::string> texts;
    for (const auto& t : c->corpus.triplets())
      for (const auto* s : {&t.base, &t.positive, &t.negative}) texts.push_back(s->text);
    auto file = vmh::export_vectors(*p->provider, texts, true);
    file.encoding = binary ? vmh::VectorEncoding::Binary : vmh::VectorEncoding::Decimal;
    vmh::save_vector_file(path, file);
    if (count) *count = file.records.size();
  });
}

vmh_status vmh_scorer_create(const char* spec, vmh_scorer** out) {
  return guard([&] {
    require(spec && out, "null argument");
    *out = new vmh_scorer{vmh::make_scorer(vmh::parse_scorer_spec(spec))};
  });
}

void vmh_scorer_free(vmh_scorer* s) { delete s; }
const char* vmh_scorer_id(const vmh_scorer* s) { return s ? s->scorer->id().c_str() : ""; }

vmh_status vmh_scorer_score(vmh_scorer* s, const char* s1, const char* s2, double* out) {
  return guard([&] {
    require(s && s1 && s2 && out, "null argument");
    *out = s->scorer->score(vmh::nfc(s1), vmh::nfc(s2));
  });
}

void vmh_eval_options_init(vmh_eval_options* opts) {
  if (!opts) return;
  *opts = vmh_eval_options{};
  opts->eps_scale = 1e-6;
  opts->order = VMH_ORDER_FORWARD;
}

vmh_status vmh_evaluate(const vmh_corpus* c, vmh_provider* const* providers, size_t n_providers,
                        const char* const* metrics, size_t n_metrics, vmh_scorer* const* scorers, size_t n_scorers,
                        const vmh_eval_options* opts, vmh_report** out) {
  return guard([&] {
    require(c && out, "null argument");
    require(n_providers == 0 || (providers && metrics && n_metrics > 0), "providers need at least one metric");
    require(n_scorers == 0 || scorers, "null scorer list");
    vmh::EvalOptions eo;
    int order = VMH_ORDER_FORWARD;
    if (opts) {
      eo.threads = opts->threads;
      if (opts->eps_scale > 0) eo.eps_scale = opts->eps_scale;
      if (opts->order) order = opts->order;
    }
    require(order >= VMH_ORDER_FORWARD && order <= VMH_ORDER_BOTH, "bad scorer order");
    std::vector<vmh::MethodSpec> methods;
    for (std::size_t p = 0; p < n_providers; ++p)
      for (std::size_t m = 0; m < n_metrics; ++m) {
        require(providers[p] && metrics[m], "null provider or metric");
        methods.push_back({providers[p]->provider, vmh::parse_metric(metrics[m]), nullptr});
      }
    require(!methods.empty() || n_scorers > 0, "no methods to evaluate");
    std::vector<vmh::EvalReport> parts;
    if (!methods.empty()) parts.push_back(vmh::evaluate(c->corpus, methods, eo));
    for (std::size_t s = 0; s < n_scorers; ++s) {
      require(scorers[s] != nullptr, "null scorer");
      if (order & VMH_ORDER_FORWARD)
        parts.push_back(vmh::evaluate_with_scorer(c->corpus, *scorers[s]->scorer, vmh::ScoreOrder::Forward, eo));
      if (order & VMH_ORDER_REVERSE)
        parts.push_back(vmh::evaluate_with_scorer(c->corpus, *scorers[s]->scorer, vmh::ScoreOrder::Reverse, eo));
    }
    *out = new vmh_report{vmh::combine_reports(parts)};
  });
}

void vmh_report_free(vmh_report* r) { delete r; }
const char* vmh_report_corpus_hash(const vmh_report* r) { return r ? r->report.corpus_hash.c_str() : ""; }
size_t vmh_report_method_count(const vmh_report* r) { return r ? r->report.methods.size() : 0; }

const char* vmh_report_method_id(const vmh_report* r, size_t i) {
  if (!r || i >= r->report.methods.size()) return nullptr;
  return r->report.methods[i].id.c_str();
}

size_t vmh_report_outcome_count(const vmh_report* r) { return r ? r->report.outcomes.size() : 0; }

vmh_status vmh_report_tally(const vmh_report* r, const char* method_id, int category, size_t* n, size_t* correct,
                            size_t* ties, size_t* errors, double* accuracy) {
  return guard([&] {
    require(r && method_id, "null argument");
    require(category >= -1 && category < VMH_CATEGORY_COUNT, "bad category index");
    const auto t = vmh::tally(r->report, method_id,
                              category < 0 ? std::nullopt : std::optional(static_cast<vmh::MRCategory>(category)));
    if (n) *n = t.n;
    if (correct) *correct = t.correct;
    if (ties) *ties = t.ties;
    if (errors) *errors = t.errors;
    if (accuracy) *accuracy = t.accuracy();
  });
}

vmh_status vmh_report_save_dump(const vmh_report* r, const char* path) {
  return guard([&] {
    require(r && path, "null argument");
    vmh::save_dump(path, r->report);
  });
}

vmh_status vmh_report_load_dump(const char* path, vmh_report** out) {
  return guard([&] {
    require(path && out, "null argument");
    *out = new vmh_report{vmh::load_dump(path)};
  });
}

vmh_status vmh_report_merge(const vmh_report* const* reports, size_t n, vmh_report** out) {
  return guard([&] {
    require(reports && n > 0 && out, "nothing to merge");
    std::vector<vmh::EvalReport> parts;
    for (std::size_t i = 0; i < n; ++i) {
      require(reports[i] != nullptr, "null report");
      parts.push_back(reports[i]->report);
    }
    *out = new vmh_report{vmh::combine_reports(parts)};
  });
}

vmh_status vmh_report_write_tables(const vmh_report* r, const char* dir, const char* prefix, int plot_data) {
  return guard([&] {
    require(r && dir, "null argument");
    vmh::write_tables(r->report, dir, prefix ? prefix : "", plot_data != 0);
  });
}

vmh_status vmh_report_write_drop(const vmh_report* metamorphic, const vmh_report* control, const char* dir) {
  return guard([&] {
    require(metamorphic && control && dir, "null argument");
    vmh::write_drop_tables(vmh::accuracy_drop(metamorphic->report, control->report), dir);
  });
}

const char* vmh_report_summary_text(const vmh_report* r) {
  if (!r) return "";
  g_text = vmh::render_text(vmh::table_rows(r->report), vmh::TableKind::Summary);
  return g_text.c_str();
}

}  // extern "C"

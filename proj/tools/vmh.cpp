// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

// vmh command-line driver. Links only the C API.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "vmh/vmh.h"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kUsage = 2;

struct Failure {
  int exit_code;
};

int exit_for(vmh_status s) {
  switch (s) {
    case VMH_E_INVALID_ARGUMENT:
    case VMH_E_IO:
    case VMH_E_MALFORMED_RECORD:
    case VMH_E_DUPLICATE_ID:
    case VMH_E_EMPTY_TEXT:
    case VMH_E_INVARIANT_VIOLATION:
    case VMH_E_FORMAT_ERROR:
    case VMH_E_DIMENSION_MISMATCH:
    case VMH_E_INCOMPATIBLE_DUMPS: return kUsage;
    default: return kPartial;
  }
}

void check(vmh_status s, const std::string& what) {
  if (s == VMH_OK) return;
  std::cerr << "vmh: " << what << ": " << vmh_status_name(s) << ": " << vmh_last_error() << "\n";
  throw Failure{exit_for(s)};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using CorpusPtr = std::unique_ptr<vmh_corpus, Deleter<vmh_corpus, vmh_corpus_free>>;
using ProviderPtr = std::unique_ptr<vmh_provider, Deleter<vmh_provider, vmh_provider_free>>;
using ScorerPtr = std::unique_ptr<vmh_scorer, Deleter<vmh_scorer, vmh_scorer_free>>;
using ReportPtr = std::unique_ptr<vmh_report, Deleter<vmh_report, vmh_report_free>>;

CorpusPtr load(const std::string& path) {
  vmh_corpus* c = nullptr;
  check(vmh_corpus_load(path.c_str(), &c), "loading " + path);
  return CorpusPtr(c);
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

// ---- tag ----
struct TagArgs {
  std::string in, out, lexicon;
};

int run_tag(const TagArgs& a) {
  size_t counts[VMH_CATEGORY_COUNT] = {};
  check(vmh_tag_file(a.in.c_str(), a.out.c_str(), a.lexicon.empty() ? nullptr : a.lexicon.c_str(), counts),
        "tagging " + a.in);
  for (int i = 0; i < VMH_CATEGORY_COUNT; ++i)
    if (counts[i]) std::cout << vmh_category_name(i) << "\t" << counts[i] << "\n";
  return kOk;
}

// ---- build ----
struct BuildArgs {
  std::string in, out, stub, endpoint, name, key_env;
  std::uint64_t seed = 0;
  std::size_t max_in_flight = 4;
  std::uint32_t timeout_ms = 0;
  int retries = -1;
};

int run_build(const BuildArgs& a) {
  vmh_build_options o;
  vmh_build_options_init(&o);
  o.seed = a.seed;
  o.stub_path = a.stub.empty() ? nullptr : a.stub.c_str();
  o.gen_endpoint = a.endpoint.empty() ? nullptr : a.endpoint.c_str();
  o.api_key_env = a.key_env.empty() ? nullptr : a.key_env.c_str();
  o.corpus_name = a.name.empty() ? nullptr : a.name.c_str();
  o.max_in_flight = a.max_in_flight;
  o.timeout_ms = a.timeout_ms;
  o.retries = a.retries;
  o.on_failure = [](const char* id, vmh_status code, const char* detail, void*) {
    std::cerr << "vmh: build: pair " << id << ": " << vmh_status_name(code) << ": " << detail << "\n";
  };
  vmh_build_stats st{};
  check(vmh_build_file(a.in.c_str(), a.out.c_str(), &o, &st), "building " + a.in);
  std::cout << "attempted " << st.attempted << ", built " << st.built << ", failed " << st.failed << ", skipped "
            << st.skipped << "\n";
  if (st.attempted > 0 && st.failed * 10 > st.attempted) {
    std::cerr << "vmh: build: more than 10% of pairs failed\n";
    return kPartial;
  }
  return kOk;
}

// ---- transform ----
struct TransformArgs {
  std::string in, out;
  bool nonmeta = false;
};

int run_transform(const TransformArgs& a) {
  auto c = load(a.in);
  vmh_corpus* t = nullptr;
  check(vmh_corpus_nonmetamorphic(c.get(), &t), "transforming " + a.in);
  CorpusPtr tp(t);
  std::string out = a.out;
  if (out.empty()) {
    const fs::path p(a.in);
    out = (p.parent_path() / (p.stem().string() + ".nonmeta.jsonl")).string();
  }
  for (size_t i = 0; i < vmh_corpus_unpaired_count(tp.get()); ++i)
    std::cerr << "vmh: transform: warning: triplet " << vmh_corpus_unpaired_id(tp.get(), i)
              << " has no partner in its category and is left unchanged\n";
  check(vmh_corpus_save(tp.get(), out.c_str()), "writing " + out);
  std::cout << out << "\n";
  return kOk;
}

// ---- embed ----
struct EmbedArgs {
  std::string in, provider, out;
  bool binary = false;
};

int run_embed(const EmbedArgs& a) {
  auto c = load(a.in);
  vmh_provider* p = nullptr;
  check(vmh_provider_create(a.provider.c_str(), &p), "provider " + a.provider);
  ProviderPtr pp(p);
  size_t n = 0;
  check(vmh_provider_export(pp.get(), c.get(), a.out.c_str(), a.binary ? 1 : 0, &n), "exporting vectors");
  std::cout << n << " vectors from " << vmh_provider_model_id(pp.get()) << " written to " << a.out << "\n";
  return kOk;
}

// ---- eval ----
struct EvalArgs {
  std::string corpus, control, out_dir, order = "forward";
  std::vector<std::string> providers, scorers, metrics;
  bool with_transform = false, plot_data = false;
  std::size_t threads = 0;
  double eps_scale = 1e-6;
};

bool has_empty_method(const vmh_report* r) {
  bool empty = false;
  for (size_t i = 0; i < vmh_report_method_count(r); ++i) {
    size_t n = 0;
    vmh_report_tally(r, vmh_report_method_id(r, i), -1, &n, nullptr, nullptr, nullptr, nullptr);
    if (n == 0) {
      std::cerr << "vmh: eval: method " << vmh_report_method_id(r, i) << " produced no valid outcomes\n";
      empty = true;
    }
  }
  return empty;
}

int run_eval(const EvalArgs& a) {
  const auto metrics = split_list(a.metrics.empty() ? std::vector<std::string>{"CD,ED,MD,BD,LD,PD,MhD"} : a.metrics);
  if (a.providers.empty() && a.scorers.empty()) {
    std::cerr << "vmh: eval: no methods given (use --provider and/or --scorer)\n";
    return kUsage;
  }
  if (!a.providers.empty() && metrics.empty()) {
    std::cerr << "vmh: eval: --metrics is empty\n";
    return kUsage;
  }
  auto corpus = load(a.corpus);
  std::vector<ProviderPtr> providers;
  std::vector<vmh_provider*> raw_providers;
  for (const auto& spec : a.providers) {
    vmh_provider* p = nullptr;
    check(vmh_provider_create(spec.c_str(), &p), "provider " + spec);
    providers.emplace_back(p);
    raw_providers.push_back(p);
  }
  std::vector<ScorerPtr> scorers;
  std::vector<vmh_scorer*> raw_scorers;
  for (const auto& spec : a.scorers) {
    vmh_scorer* s = nullptr;
    check(vmh_scorer_create(spec.c_str(), &s), "scorer " + spec);
    scorers.emplace_back(s);
    raw_scorers.push_back(s);
  }
  std::vector<const char*> metric_ptrs;
  for (const auto& m : metrics) metric_ptrs.push_back(m.c_str());

  vmh_eval_options o;
  vmh_eval_options_init(&o);
  o.threads = a.threads;
  o.eps_scale = a.eps_scale;
  o.order = a.order == "reverse" ? VMH_ORDER_REVERSE : a.order == "both" ? VMH_ORDER_BOTH : VMH_ORDER_FORWARD;

  auto run = [&](const vmh_corpus* c) {
    vmh_report* r = nullptr;
    check(vmh_evaluate(c, raw_providers.data(), raw_providers.size(), metric_ptrs.data(), metric_ptrs.size(),
                       raw_scorers.data(), raw_scorers.size(), &o, &r),
          "evaluating");
    return ReportPtr(r);
  };

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  auto main_report = run(corpus.get());
  check(vmh_report_save_dump(main_report.get(), (fs::path(a.out_dir) / "outcomes.jsonl").c_str()), "writing outcomes");
  check(vmh_report_write_tables(main_report.get(), a.out_dir.c_str(), nullptr, a.plot_data), "writing tables");
  std::cout << vmh_report_summary_text(main_report.get());
  bool empty = has_empty_method(main_report.get());

  CorpusPtr control;
  if (!a.control.empty()) {
    control = load(a.control);
  } else if (a.with_transform) {
    vmh_corpus* t = nullptr;
    check(vmh_corpus_nonmetamorphic(corpus.get(), &t), "transforming corpus");
    control.reset(t);
  }
  if (control) {
    auto control_report = run(control.get());
    check(vmh_report_save_dump(control_report.get(), (fs::path(a.out_dir) / "control_outcomes.jsonl").c_str()),
          "writing control outcomes");
    check(vmh_report_write_tables(control_report.get(), a.out_dir.c_str(), "control_", a.plot_data),
          "writing control tables");
    check(vmh_report_write_drop(main_report.get(), control_report.get(), a.out_dir.c_str()), "writing drop table");
    std::ifstream drop(fs::path(a.out_dir) / "drop.txt");
    std::cout << "\n" << drop.rdbuf();
    empty = has_empty_method(control_report.get()) || empty;
  }
  return empty ? kPartial : kOk;
}

// ---- report ----
struct ReportArgs {
  std::vector<std::string> dumps;
  std::string out_dir;
  bool plot_data = false;
};

int run_report(const ReportArgs& a) {
  std::vector<ReportPtr> reports;
  std::vector<const vmh_report*> raw;
  for (const auto& d : a.dumps) {
    vmh_report* r = nullptr;
    check(vmh_report_load_dump(d.c_str(), &r), "loading " + d);
    reports.emplace_back(r);
    raw.push_back(r);
  }
  vmh_report* merged = nullptr;
  check(vmh_report_merge(raw.data(), raw.size(), &merged), "merging dumps");
  ReportPtr m(merged);
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  check(vmh_report_write_tables(m.get(), a.out_dir.c_str(), nullptr, a.plot_data), "writing tables");
  std::cout << vmh_report_summary_text(m.get());
  return kOk;
}

// Splits "--config FILE" / "--config=FILE" out of argv and merges the file's entries.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream in(path);
  if (!in) throw vmh::cli::ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return vmh::cli::merge_config(rest, vmh::cli::parse_config(ss.str(), vmh::cli::process_env()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metamorphic triplet harness for vector matching methods", "vmh"};
  app.require_subcommand(1);
  app.set_version_flag("--version", vmh_version());
  app.add_option("--config", "key = value file; command-line flags override it");

  TagArgs tag;
  auto* tag_cmd = app.add_subcommand("tag", "Tag sentence pairs with metamorphic relation categories");
  tag_cmd->add_option("pairs,--pairs", tag.in, "Pair records {id, s1, s2, label}")->required()->check(CLI::ExistingFile);
  tag_cmd->add_option("-o,--out", tag.out, "Tagged output")->required();
  tag_cmd->add_option("--lexicon", tag.lexicon, "word<TAB>TAG lexicon instead of the bundled one")->check(CLI::ExistingFile);

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Complete tagged pairs into triplets");
  build_cmd->add_option("tagged,--tagged", build.in, "Tagged pairs")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("-o,--out", build.out, "Corpus output")->required();
  build_cmd->add_option("--seed", build.seed, "Run seed")->required();
  auto* stub = build_cmd->add_option("--stub", build.stub, "Recorded generator responses")->check(CLI::ExistingFile);
  auto* live = build_cmd->add_option("--gen-endpoint", build.endpoint, "Generation endpoint URL");
  stub->excludes(live);
  build_cmd->add_option("--name", build.name, "Corpus name");
  build_cmd->add_option("--api-key-env", build.key_env, "Variable holding the generation API key");
  build_cmd->add_option("--max-in-flight", build.max_in_flight, "Concurrent generation requests")->check(CLI::PositiveNumber);
  build_cmd->add_option("--timeout-ms", build.timeout_ms, "Request timeout");
  build_cmd->add_option("--retries", build.retries, "Retries after the first attempt");

  TransformArgs transform;
  auto* transform_cmd = app.add_subcommand("transform", "Build the non-metamorphic control corpus");
  transform_cmd->add_option("corpus,--corpus", transform.in, "Corpus")->required()->check(CLI::ExistingFile);
  transform_cmd->add_flag("--non-metamorphic", transform.nonmeta, "Swap negatives with partner positives")->required();
  transform_cmd->add_option("-o,--out", transform.out, "Output (default <stem>.nonmeta.jsonl)");

  EmbedArgs embed;
  auto* embed_cmd = app.add_subcommand("embed", "Write a vector file for every corpus text");
  embed_cmd->add_option("corpus,--corpus", embed.in, "Corpus")->required()->check(CLI::ExistingFile);
  embed_cmd->add_option("--provider", embed.provider, "Provider spec")->required();
  embed_cmd->add_option("-o,--out", embed.out, "Vector file")->required();
  embed_cmd->add_flag("--binary", embed.binary, "Store components as base64 float64");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate methods on a corpus");
  eval_cmd->add_option("corpus,--corpus", eval.corpus, "Corpus")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--provider", eval.providers, "Provider spec (repeatable)");
  eval_cmd->add_option("--metrics", eval.metrics, "Comma-separated metric marks (default: all seven)");
  eval_cmd->add_option("--scorer", eval.scorers, "Scorer spec (repeatable)");
  eval_cmd->add_option("--order", eval.order, "Scorer argument order")
      ->check(CLI::IsMember({"forward", "reverse", "both"}));
  auto* control = eval_cmd->add_option("--control", eval.control, "Control corpus for the drop table")
                      ->check(CLI::ExistingFile);
  auto* with_t = eval_cmd->add_flag("--with-transform", eval.with_transform, "Use the non-metamorphic transform as control");
  control->excludes(with_t);
  eval_cmd->add_option("--out-dir", eval.out_dir, "Output directory")->required();
  eval_cmd->add_option("--threads", eval.threads, "Worker threads (0: all cores)");
  eval_cmd->add_option("--eps-scale", eval.eps_scale, "Covariance regularization scale")->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--plot-data", eval.plot_data, "Also write plot_data.csv");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Merge outcome dumps into report tables");
  report_cmd->add_option("dumps,--dump", report.dumps, "Outcome dumps")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--out-dir", report.out_dir, "Output directory")->required();
  report_cmd->add_flag("--plot-data", report.plot_data, "Also write plot_data.csv");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config(std::move(args));
  } catch (const vmh::cli::ConfigError& e) {
    std::cerr << "vmh: " << e.what() << "\n";
    return kUsage;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (tag_cmd->parsed()) return run_tag(tag);
    if (build_cmd->parsed()) return run_build(build);
    if (transform_cmd->parsed()) return run_transform(transform);
    if (embed_cmd->parsed()) return run_embed(embed);
    if (eval_cmd->parsed()) return run_eval(eval);
    if (report_cmd->parsed()) return run_report(report);
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return kUsage;
}

// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmh/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>

namespace vmh {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Correct: return "Correct";
    case Verdict::FalseMatch: return "FalseMatch";
    case Verdict::Tie: return "Tie";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  for (Verdict v : {Verdict::Correct, Verdict::FalseMatch, Verdict::Tie})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::string_view to_string(MethodKind k) { return k == MethodKind::Distance ? "distance" : "score"; }

Verdict verdict_from_distances(double d_pos, double d_neg) {
  if (d_pos == d_neg) return Verdict::Tie;
  return d_pos < d_neg ? Verdict::Correct : Verdict::FalseMatch;
}

Verdict verdict_from_scores(double s_pos, double s_neg) {
  if (s_pos == s_neg) return Verdict::Tie;
  return s_pos > s_neg ? Verdict::Correct : Verdict::FalseMatch;
}

std::string MethodSpec::id() const {
  return (provider ? provider->model_id() : std::string("?")) + "/" + std::string(to_string(metric));
}

void Tally::add(const MatchOutcome& o) {
  if (!o.ok()) {
    ++errors;
    return;
  }
  ++n;
  if (o.verdict == Verdict::Correct) ++correct;
  if (o.verdict == Verdict::Tie) ++ties;
  sum_d_pos += o.d_pos;
  sum_d_neg += o.d_neg;
}

double Tally::accuracy() const {
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(correct) / static_cast<double>(n);
}
double Tally::avg_d_pos() const {
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum_d_pos / static_cast<double>(n);
}
double Tally::avg_d_neg() const {
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum_d_neg / static_cast<double>(n);
}

Tally tally(const EvalReport& r, std::string_view method_id, std::optional<MRCategory> category) {
  Tally t;
  for (const auto& o : r.outcomes)
    if (o.method_id == method_id && (!category || o.category == *category)) t.add(o);
  return t;
}

namespace {

std::size_t worker_count(const EvalOptions& opts, std::size_t jobs) {
  std::size_t n = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

template <typename F>
void parallel_for(std::size_t jobs, std::size_t threads, F&& body) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) body(i);
  };
  std::vector<std::jthread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
}

MatchOutcome failed(const Triplet& t, const std::string& method_id, ErrorCode code, const std::string& what) {
  MatchOutcome o;
  o.triplet_id = t.id;
  o.method_id = method_id;
  o.category = t.category;
  o.error_code = code;
  o.error = what;
  return o;
}

struct Embedded {
  std::optional<EmbeddingVector> vector;  // normalized
  ErrorCode code = ErrorCode::ProviderError;
  std::string error;
};

}  // namespace

MatchOutcome match_triplet(const Triplet& t, const MethodSpec& m) {
  try {
    if (!m.provider) throw Error(ErrorCode::InvalidArgument, "method has no provider");
    if (m.metric == MetricId::MD && !m.covariance)
      throw Error(ErrorCode::MissingCovariance, "MD needs a fitted covariance model");
    const auto b = normalize(m.provider->embed(t.base.text));
    const auto p = normalize(m.provider->embed(t.positive.text));
    const auto n = normalize(m.provider->embed(t.negative.text));
    MatchOutcome o;
    o.triplet_id = t.id;
    o.method_id = m.id();
    o.category = t.category;
    o.d_pos = distance(b, p, m.metric, m.covariance.get());
    o.d_neg = distance(b, n, m.metric, m.covariance.get());
    o.verdict = verdict_from_distances(o.d_pos, o.d_neg);
    return o;
  } catch (const Error& e) {
    throw Error(e.code(), t.id + ": " + e.what());
  }
}

EvalReport evaluate(const Corpus& c, std::vector<MethodSpec> methods, const EvalOptions& opts) {
  if (methods.empty()) throw Error(ErrorCode::InvalidArgument, "no methods to evaluate");
  for (const auto& m : methods)
    if (!m.provider) throw Error(ErrorCode::InvalidArgument, "method has no provider");

  EvalReport report;
  report.corpus_hash = corpus_hash(c);
  report.corpus_name = c.metadata().name;
  for (const auto& m : methods) {
    for (const auto& seen : report.methods)
      if (seen.id == m.id()) throw Error(ErrorCode::InvalidArgument, "duplicate method " + m.id());
    report.methods.push_back({m.id(), MethodKind::Distance});
  }

  std::vector<std::string> texts;
  {
    std::set<std::string> seen;
    for (const auto& t : c.triplets())
      for (const auto* s : {&t.base, &t.positive, &t.negative})
        if (seen.insert(s->text).second) texts.push_back(s->text);
  }

  // Embed every unique text once per provider, then fit covariance where MD lacks one.
  std::map<const EmbeddingProvider*, std::unordered_map<std::string, Embedded>> cache;
  std::map<const EmbeddingProvider*, std::shared_ptr<const CovarianceModel>> fitted;
  std::map<const EmbeddingProvider*, std::pair<ErrorCode, std::string>> fit_errors;
  for (const auto& m : methods) {
    const auto* key = m.provider.get();
    if (!cache.contains(key)) {
      auto& table = cache[key];
      const auto results = m.provider->embed_batch(texts);
      for (std::size_t i = 0; i < texts.size(); ++i) {
        Embedded e;
        if (results[i].vector) {
          try {
            if (results[i].vector->dimension() != m.provider->dimension() && m.provider->dimension() != 0)
              throw Error(ErrorCode::DimensionMismatch, m.provider->model_id() + " returned dimension " +
                                                            std::to_string(results[i].vector->dimension()));
            e.vector = normalize(*results[i].vector);
          } catch (const Error& err) {
            e.code = err.code();
            e.error = err.what();
          }
        } else {
          e.code = results[i].code;
          e.error = results[i].error;
        }
        table.emplace(texts[i], std::move(e));
      }
    }
    if (m.metric == MetricId::MD && !m.covariance && !fitted.contains(key) && !fit_errors.contains(key)) {
      std::vector<EmbeddingVector> sample;
      for (const auto& text : texts)
        if (const auto& e = cache[key][text]; e.vector) sample.push_back(*e.vector);
      try {
        fitted[key] = std::make_shared<const CovarianceModel>(fit_covariance(sample, opts.eps_scale));
      } catch (const Error& err) {
        fit_errors[key] = {err.code(), err.what()};
      }
    }
  }
  for (auto& m : methods)
    if (m.metric == MetricId::MD && !m.covariance)
      if (auto it = fitted.find(m.provider.get()); it != fitted.end()) m.covariance = it->second;

  const auto& triplets = c.triplets();
  const std::size_t jobs = methods.size() * triplets.size();
  report.outcomes.resize(jobs);
  parallel_for(jobs, worker_count(opts, jobs), [&](std::size_t job) {
    const auto& m = methods[job / triplets.size()];
    const auto& t = triplets[job % triplets.size()];
    const auto id = report.methods[job / triplets.size()].id;
    auto& slot = report.outcomes[job];
    const auto& table = cache.at(m.provider.get());
    try {
      if (m.metric == MetricId::MD && !m.covariance) {
        auto it = fit_errors.find(m.provider.get());
        if (it != fit_errors.end()) throw Error(it->second.first, it->second.second);
        throw Error(ErrorCode::MissingCovariance, "MD needs a fitted covariance model");
      }
      const EmbeddingVector* v[3];
      const Sentence* slots[3] = {&t.base, &t.positive, &t.negative};
      for (int k = 0; k < 3; ++k) {
        const auto& e = table.at(slots[k]->text);
        if (!e.vector) throw Error(e.code, slots[k]->id + ": " + e.error);
        v[k] = &*e.vector;
      }
      MatchOutcome o;
      o.triplet_id = t.id;
      o.method_id = id;
      o.category = t.category;
      o.d_pos = distance(*v[0], *v[1], m.metric, m.covariance.get());
      o.d_neg = distance(*v[0], *v[2], m.metric, m.covariance.get());
      o.verdict = verdict_from_distances(o.d_pos, o.d_neg);
      slot = std::move(o);
    } catch (const Error& e) {
      slot = failed(t, id, e.code(), e.what());
    }
  });
  return report;
}

EvalReport evaluate_with_scorer(const Corpus& c, Scorer& s, ScoreOrder order, const EvalOptions& opts) {
  EvalReport report;
  report.corpus_hash = corpus_hash(c);
  report.corpus_name = c.metadata().name;
  const std::string id = s.id() + (order == ScoreOrder::Reverse ? "-R" : "");
  report.methods.push_back({id, MethodKind::Score});
  const auto& triplets = c.triplets();
  report.outcomes.resize(triplets.size());
  parallel_for(triplets.size(), worker_count(opts, triplets.size()), [&](std::size_t i) {
    const auto& t = triplets[i];
    try {
      auto one = [&](const Sentence& cand) {
        return order == ScoreOrder::Forward ? s.score(t.base.text, cand.text) : s.score(cand.text, t.base.text);
      };
      MatchOutcome o;
      o.triplet_id = t.id;
      o.method_id = id;
      o.category = t.category;
      o.d_pos = one(t.positive);
      o.d_neg = one(t.negative);
      o.verdict = verdict_from_scores(o.d_pos, o.d_neg);
      report.outcomes[i] = std::move(o);
    } catch (const Error& e) {
      report.outcomes[i] = failed(t, id, e.code(), t.id + ": " + e.what());
    }
  });
  return report;
}

EvalReport combine_reports(const std::vector<EvalReport>& reports) {
  EvalReport out;
  if (reports.empty()) return out;
  out.corpus_hash = reports.front().corpus_hash;
  out.corpus_name = reports.front().corpus_name;
  std::map<std::pair<std::string, std::string>, std::size_t> index;  // (method, triplet) -> outcome
  for (const auto& r : reports) {
    if (r.corpus_hash != out.corpus_hash)
      throw Error(ErrorCode::IncompatibleDumps,
                  "corpus hash " + r.corpus_hash + " does not match " + out.corpus_hash);
    for (const auto& m : r.methods) {
      auto it = std::find_if(out.methods.begin(), out.methods.end(), [&](const MethodInfo& x) { return x.id == m.id; });
      if (it == out.methods.end()) out.methods.push_back(m);
      else if (it->kind != m.kind) throw Error(ErrorCode::IncompatibleDumps, "method " + m.id + " changes kind");
    }
    for (const auto& o : r.outcomes) {
      auto [it, fresh] = index.emplace(std::make_pair(o.method_id, o.triplet_id), out.outcomes.size());
      if (fresh) {
        out.outcomes.push_back(o);
      } else if (!(out.outcomes[it->second] == o)) {
        throw Error(ErrorCode::IncompatibleDumps,
                    "conflicting outcomes for " + o.triplet_id + " under " + o.method_id);
      }
    }
  }
  std::stable_sort(out.outcomes.begin(), out.outcomes.end(), [&](const MatchOutcome& a, const MatchOutcome& b) {
    auto rank = [&](const std::string& id) {
      return std::find_if(out.methods.begin(), out.methods.end(), [&](const MethodInfo& x) { return x.id == id; }) -
             out.methods.begin();
    };
    return rank(a.method_id) < rank(b.method_id);
  });
  return out;
}

std::vector<AccuracyDrop> accuracy_drop(const EvalReport& metamorphic, const EvalReport& control) {
  std::vector<AccuracyDrop> rows;
  for (const auto& m : metamorphic.methods) {
    bool in_control = false;
    for (const auto& cm : control.methods) in_control = in_control || cm.id == m.id;
    if (!in_control) continue;
    AccuracyDrop d;
    d.method_id = m.id;
    d.metamorphic = tally(metamorphic, m.id).accuracy();
    d.control = tally(control, m.id).accuracy();
    d.drop = d.control - d.metamorphic;
    rows.push_back(d);
  }
  return rows;
}

}  // namespace vmh

// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "vmh/builder.hpp"
#include "vmh/simulator.hpp"
#include "vmh/text.hpp"

namespace vmh {
namespace {

const std::string kFixtures = VMH_FIXTURE_DIR;

Triplet make(std::string id, MRCategory c, std::string b, std::string p, std::string n) {
  Triplet t;
  t.id = id;
  t.category = c;
  t.base = {slot_id(id, "base"), std::move(b), Source::Collected};
  t.positive = {slot_id(id, "positive"), std::move(p), Source::Generated};
  t.negative = {slot_id(id, "negative"), std::move(n), Source::Collected};
  return t;
}

MethodSpec method(std::shared_ptr<EmbeddingProvider> p, MetricId m) { return MethodSpec{std::move(p), m, nullptr}; }

class ConstantScorer final : public Scorer {
 public:
  explicit ConstantScorer(double value) : Scorer(ScorerSpec{ScorerKind::Echo, "constant"}), value_(value) {}

 protected:
  double raw_score(std::string_view, std::string_view) override { return value_; }

 private:
  double value_;
};

TEST(Verdict, Rules) {
  EXPECT_EQ(verdict_from_distances(0.1, 0.2), Verdict::Correct);
  EXPECT_EQ(verdict_from_distances(0.2, 0.1), Verdict::FalseMatch);
  EXPECT_EQ(verdict_from_distances(0.2, 0.2), Verdict::Tie);
  EXPECT_EQ(verdict_from_scores(0.9, 0.1), Verdict::Correct);
  EXPECT_EQ(verdict_from_scores(0.1, 0.9), Verdict::FalseMatch);
  EXPECT_EQ(verdict_from_scores(0.5, 0.5), Verdict::Tie);
  for (Verdict v : {Verdict::Correct, Verdict::FalseMatch, Verdict::Tie}) EXPECT_EQ(parse_verdict(to_string(v)), v);
  EXPECT_FALSE(parse_verdict("maybe"));
}

TEST(MatchTriplet, SmallExample) {
  auto bow = std::make_shared<BagOfWordsProvider>(256);
  const auto t = make("x", MRCategory::WordDel, "a b c", "a b c d", "x y z");
  const auto o = match_triplet(t, method(bow, MetricId::CD));
  EXPECT_EQ(o.verdict, Verdict::Correct);
  EXPECT_EQ(o.method_id, "bow-256/CD");
  EXPECT_LT(o.d_pos, o.d_neg);
  // With no hash collisions the base shares nothing with the negative.
  EXPECT_NEAR(o.d_neg, 1.0, 1e-12);
  EXPECT_NEAR(o.d_pos, 1.0 - 3.0 / (std::sqrt(3.0) * 2.0), 1e-12);
}

TEST(MatchTriplet, BagOfWordsCannotSeeWordSwap) {
  auto bow = std::make_shared<BagOfWordsProvider>(256);
  const auto t = make("ws", MRCategory::WordSwap,
                      "The only industry in the town is light farming on the small rice paddies.",
                      "Light farming on the small rice paddies is the only industry of the town.",
                      "The light industry in the town is only farming on the small rice paddies.");
  for (MetricId m : {MetricId::CD, MetricId::ED, MetricId::MhD, MetricId::BD, MetricId::LD}) {
    const auto o = match_triplet(t, method(bow, m));
    EXPECT_EQ(o.d_neg, 0.0) << to_string(m);
    EXPECT_NE(o.verdict, Verdict::Correct) << to_string(m);
  }
}

TEST(MatchTriplet, ErrorsCarryTripletId) {
  auto files = std::make_shared<VectorFileProvider>(VectorFile{"m", 2, VectorEncoding::Decimal, {}});
  try {
    match_triplet(make("lost", MRCategory::ObjSub, "a", "b", "c"), method(files, MetricId::CD));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingVector);
    EXPECT_EQ(std::string(e.what()).rfind("lost: ", 0), 0u) << e.what();
  }
  auto bow = std::make_shared<BagOfWordsProvider>(8);
  try {
    match_triplet(make("md", MRCategory::ObjSub, "a", "b", "c"), method(bow, MetricId::MD));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingCovariance);
  }
}

TEST(Evaluate, MatchesPerTripletBruteForce) {
  const auto corpus = load_corpus(kFixtures + "/corpus32.jsonl");
  auto bow = std::make_shared<BagOfWordsProvider>(256);
  auto chr = std::make_shared<CharNgramProvider>(1024);
  std::vector<MethodSpec> methods;
  for (auto p : {std::shared_ptr<EmbeddingProvider>(bow), std::shared_ptr<EmbeddingProvider>(chr)})
    for (MetricId m : {MetricId::CD, MetricId::ED, MetricId::MhD, MetricId::BD, MetricId::LD, MetricId::PD})
      methods.push_back(method(p, m));
  const auto report = evaluate(corpus, methods, {.threads = 3});
  ASSERT_EQ(report.outcomes.size(), methods.size() * corpus.size());
  EXPECT_EQ(report.corpus_hash, corpus_hash(corpus));
  std::size_t k = 0;
  for (const auto& m : methods)
    for (const auto& t : corpus.triplets()) {
      const auto& got = report.outcomes[k++];
      const auto want = match_triplet(t, m);
      EXPECT_EQ(got, want) << m.id() << " " << t.id;
    }
}

TEST(Evaluate, ThreadCountDoesNotChangeResults) {
  const auto corpus = load_corpus(kFixtures + "/corpus32.jsonl");
  auto chr = std::make_shared<CharNgramProvider>(1024);
  std::vector<MethodSpec> methods;
  for (MetricId m : kAllMetrics) methods.push_back(method(chr, m));
  EXPECT_EQ(evaluate(corpus, methods, {.threads = 1}), evaluate(corpus, methods, {.threads = 4}));
}

TEST(Evaluate, FitsCovarianceForMahalanobis) {
  const auto corpus = load_corpus(kFixtures + "/corpus32.jsonl");
  auto bow = std::make_shared<BagOfWordsProvider>(16);
  const auto report = evaluate(corpus, {method(bow, MetricId::MD)});
  const auto t = tally(report, "bow-16/MD");
  EXPECT_EQ(t.errors, 0u);
  EXPECT_EQ(t.n, corpus.size());
}

TEST(Evaluate, CosineAndEuclideanAgreeOnUnitVectors) {
  const auto corpus = load_corpus(kFixtures + "/corpus32.jsonl");
  auto chr = std::make_shared<CharNgramProvider>(1024);
  const auto r = evaluate(corpus, {method(chr, MetricId::CD), method(chr, MetricId::ED)});
  const std::size_t n = corpus.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cd = r.outcomes[i];
    const auto& ed = r.outcomes[n + i];
    if (std::abs(cd.d_pos - cd.d_neg) > 1e-9) EXPECT_EQ(cd.verdict, ed.verdict) << cd.triplet_id;
    // ||a-b||^2 = 2(1 - cos) for unit vectors.
    EXPECT_NEAR(ed.d_pos * ed.d_pos, 2 * cd.d_pos, 1e-9);
  }
}

TEST(Evaluate, NearCopyPositivesAreAlwaysCorrect) {
  // Positive differs from the base only in final punctuation; the negative is unrelated text.
  std::vector<Triplet> ts;
  const char* bases[] = {"The river flooded the old mill last spring.", "Seven students passed the final exam early.",
                         "Her garden grows tomatoes and tall sunflowers.", "The train left the station before noon."};
  const char* negs[] = {"Quantum chips need extremely cold rooms.", "A violin solo opened the concert tonight.",
                        "Pilots checked every gauge twice.", "Bakers rise well before dawn."};
  for (int i = 0; i < 4; ++i) {
    std::string b = bases[i];
    ts.push_back(make("s" + std::to_string(i), kTripletCategories[i], b, b.substr(0, b.size() - 1) + "!", negs[i]));
  }
  const Corpus c(ts);
  auto chr = std::make_shared<CharNgramProvider>(1024);
  auto bow = std::make_shared<BagOfWordsProvider>(256);
  std::vector<MethodSpec> methods;
  for (auto p : {std::shared_ptr<EmbeddingProvider>(chr), std::shared_ptr<EmbeddingProvider>(bow)})
    for (MetricId m : kAllMetrics) methods.push_back(method(p, m));
  const auto r = evaluate(c, methods);
  for (const auto& o : r.outcomes) {
    ASSERT_TRUE(o.ok()) << o.method_id << ": " << o.error;
    EXPECT_EQ(o.verdict, Verdict::Correct) << o.method_id << " " << o.triplet_id;
  }
}

TEST(Evaluate, MissingVectorsBecomeErrorOutcomes) {
  const Corpus c({make("a", MRCategory::ObjSub, "one", "two", "three"),
                  make("b", MRCategory::ObjSub, "four", "five", "six")});
  VectorFile f{"m", 2, VectorEncoding::Decimal, {}};
  for (const char* t : {"one", "two", "three", "four", "five"})
    f.records.push_back({text_hash(t), t, EmbeddingVector({1.0, static_cast<double>(std::string(t).size())})});
  auto files = std::make_shared<VectorFileProvider>(f);
  const auto r = evaluate(c, {method(files, MetricId::ED)});
  ASSERT_EQ(r.outcomes.size(), 2u);
  EXPECT_TRUE(r.outcomes[0].ok());
  EXPECT_FALSE(r.outcomes[1].ok());
  EXPECT_EQ(r.outcomes[1].error_code, ErrorCode::MissingVector);
  const auto t = tally(r, "m/ED");
  EXPECT_EQ(t.n, 1u);
  EXPECT_EQ(t.errors, 1u);
}

TEST(Evaluate, RejectsBadMethodLists) {
  const auto corpus = load_corpus(kFixtures + "/corpus32.jsonl");
  auto bow = std::make_shared<BagOfWordsProvider>(8);
  EXPECT_THROW(evaluate(corpus, {}), Error);
  EXPECT_THROW(evaluate(corpus, {method(bow, MetricId::CD), method(bow, MetricId::CD)}), Error);
}

TEST(Tally, NanWhenEmpty) {
  Tally t;
  EXPECT_TRUE(std::isnan(t.accuracy()));
  EXPECT_TRUE(std::isnan(t.avg_d_pos()));
}

TEST(Scorer, ConstantScorerTiesEverywhere) {
  const auto corpus = load_corpus(kFixtures + "/corpus32.jsonl");
  ConstantScorer s(0.5);
  for (auto order : {ScoreOrder::Forward, ScoreOrder::Reverse}) {
    const auto r = evaluate_with_scorer(corpus, s, order);
    const std::string id = order == ScoreOrder::Forward ? "constant" : "constant-R";
    ASSERT_EQ(r.methods.size(), 1u);
    EXPECT_EQ(r.methods[0], (MethodInfo{id, MethodKind::Score}));
    const auto t = tally(r, id);
    EXPECT_EQ(t.n, corpus.size());
    EXPECT_EQ(t.ties, corpus.size());
    EXPECT_EQ(t.accuracy(), 0.0);
  }
}

TEST(Scorer, ContainmentIsOneWayOnDeletionAndEntailment) {
  const auto corpus = load_corpus(kFixtures + "/oneway.jsonl");
  ContainmentScorer s;
  const auto fwd = evaluate_with_scorer(corpus, s, ScoreOrder::Forward);
  const auto rev = evaluate_with_scorer(corpus, s, ScoreOrder::Reverse);
  for (MRCategory c : kTripletCategories) {
    const auto f = tally(fwd, "containment", c), r = tally(rev, "containment-R", c);
    if (f.n == 0) continue;
    if (c == MRCategory::WordDel || c == MRCategory::ErrNli) {
      EXPECT_EQ(f.accuracy(), 0.0) << to_string(c);
      EXPECT_EQ(r.accuracy(), 1.0) << to_string(c);
    } else {
      EXPECT_EQ(f.accuracy(), r.accuracy()) << to_string(c);
    }
  }
}

TEST(Combine, IdentityUnionAndConflicts) {
  const auto corpus = load_corpus(kFixtures + "/corpus32.jsonl");
  auto bow = std::make_shared<BagOfWordsProvider>(64);
  const auto a = evaluate(corpus, {method(bow, MetricId::CD)});
  const auto b = evaluate(corpus, {method(bow, MetricId::ED)});
  EXPECT_EQ(combine_reports({a}), a);
  EXPECT_EQ(combine_reports({a, a}), a);
  const auto ab = combine_reports({a, b});
  EXPECT_EQ(ab, evaluate(corpus, {method(bow, MetricId::CD), method(bow, MetricId::ED)}));
  EXPECT_EQ(combine_reports({b, a}).methods[0].id, "bow-64/ED");

  auto other = a;
  other.corpus_hash = "0000000000000000";
  try {
    combine_reports({a, other});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompatibleDumps);
  }
  auto changed = a;
  changed.outcomes[0].d_pos += 1;
  EXPECT_THROW(combine_reports({a, changed}), Error);
}

TEST(AccuracyDrop, ControlMinusMetamorphic) {
  const auto corpus = load_corpus(kFixtures + "/corpus32.jsonl");
  const auto control = make_nonmetamorphic(corpus);
  auto chr = std::make_shared<CharNgramProvider>(1024);
  auto bow = std::make_shared<BagOfWordsProvider>(256);
  std::vector<MethodSpec> ms = {method(chr, MetricId::CD), method(bow, MetricId::CD)};
  const auto meta = evaluate(corpus, ms);
  const auto ctrl = evaluate(control, ms);
  const auto drops = accuracy_drop(meta, ctrl);
  ASSERT_EQ(drops.size(), 2u);
  for (const auto& d : drops) {
    EXPECT_EQ(d.metamorphic, tally(meta, d.method_id).accuracy());
    EXPECT_EQ(d.control, tally(ctrl, d.method_id).accuracy());
    EXPECT_EQ(d.drop, d.control - d.metamorphic);
  }
}

}  // namespace
}  // namespace vmh

//
// Copyright 2026 The mrcdata Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "mrcdata/negatives.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "mrcdata/error.h"
#include "test_util.h"

namespace mrcdata {
namespace {

// Straight re-implementation of the selection rule: full sort of every
// candidate for every label, no cache.
std::vector<std::vector<std::string>> OracleMine(const std::vector<QALabel>& train,
                                                 const std::vector<Passage>& corpus, int k,
                                                 const SimilarityScorer& scorer, int threshold) {
  std::map<std::string, int> used;
  std::vector<std::vector<std::string>> out;
  for (const QALabel& l : train) {
    std::vector<std::pair<double, std::string>> cands;
    for (const Passage& p : corpus) {
      if (p.id == l.positive.id) continue;
      cands.emplace_back(scorer.Score(l.positive.text, p.text), p.id);
    }
    std::sort(cands.begin(), cands.end());
    std::vector<std::string> picked;
    for (const auto& [score, id] : cands) {
      if (static_cast<int>(picked.size()) == k) break;
      if (used[id] >= threshold) continue;
      picked.push_back(id);
      ++used[id];
    }
    out.push_back(picked);
  }
  return out;
}

std::vector<std::vector<std::string>> NegativeIds(const std::vector<QALabel>& labels) {
  std::vector<std::vector<std::string>> out;
  for (const QALabel& l : labels) {
    std::vector<std::string> ids;
    for (const Passage& p : l.negatives) ids.push_back(p.id);
    out.push_back(ids);
  }
  return out;
}

std::vector<Passage> CatCorpus() {
  return {Passage::Make("P1", "", "the cat sat"), Passage::Make("P2", "", "dogs bark loudly"),
          Passage::Make("P3", "", "the cat slept")};
}

TEST(MineNegativesTest, PicksLowestSimilarity) {
  auto corpus = CatCorpus();
  QALabel l = testing::MakeLabel("a", "q", "cat", "", "P1");
  l.positive = corpus[0];
  OccurrenceLedger ledger(kUnboundedThreshold);
  auto out = MineNegatives({l}, corpus, 1, JaccardScorer(), ledger);
  EXPECT_EQ(NegativeIds(out), (std::vector<std::vector<std::string>>{{"P2"}}));
}

TEST(MineNegativesTest, LedgerCapForcesNextCandidate) {
  auto corpus = CatCorpus();
  QALabel a = testing::MakeLabel("a", "q", "cat", "");
  a.positive = corpus[0];
  QALabel b = testing::MakeLabel("b", "q", "cat", "");
  b.positive = corpus[2];
  OccurrenceLedger ledger(1);
  auto out = MineNegatives({a, b}, corpus, 1, JaccardScorer(), ledger);
  EXPECT_EQ(NegativeIds(out), (std::vector<std::vector<std::string>>{{"P2"}, {"P1"}}));
  EXPECT_EQ(ledger.count("P2"), 1);
  EXPECT_EQ(ledger.max_count(), 1);
}

TEST(MineNegativesTest, InsufficientCandidates) {
  std::vector<Passage> corpus = {Passage::Make("P1", "", "a"), Passage::Make("P2", "", "b")};
  QALabel l = testing::MakeLabel("lbl7", "q", "a", "");
  l.positive = corpus[0];
  OccurrenceLedger ledger;
  try {
    MineNegatives({l}, corpus, 2, JaccardScorer(), ledger);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientNegatives);
    EXPECT_NE(std::string(e.what()).find("lbl7"), std::string::npos);
  }
}

TEST(MineNegativesTest, TiesBrokenByPassageId) {
  std::vector<Passage> corpus = {Passage::Make("pos", "", "a"), Passage::Make("z", "", "b"),
                                 Passage::Make("m", "", "c")};
  QALabel l = testing::MakeLabel("x", "q", "a", "");
  l.positive = corpus[0];
  OccurrenceLedger ledger(kUnboundedThreshold);
  auto out = MineNegatives({l}, corpus, 2, JaccardScorer(), ledger);
  EXPECT_EQ(NegativeIds(out)[0], (std::vector<std::string>{"m", "z"}));
}

TEST(MineNegativesTest, MatchesOracleWithAndWithoutCap) {
  std::mt19937_64 rng(99);
  JaccardScorer scorer;
  for (int iter = 0; iter < 60; ++iter) {
    int n = std::uniform_int_distribution<int>(10, 80)(rng);
    auto corpus = testing::RandomCorpus(rng, n);
    auto labels = testing::RandomLabels(rng, corpus, std::uniform_int_distribution<int>(1, 30)(rng));
    int k = std::uniform_int_distribution<int>(1, 5)(rng);
    int threshold = iter % 2 == 0 ? kUnboundedThreshold
                                  : std::uniform_int_distribution<int>(3, 10)(rng);
    OccurrenceLedger ledger(threshold);
    std::vector<QALabel> out;
    try {
      out = MineNegatives(labels, corpus, k, scorer, ledger);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::kInsufficientNegatives);
      continue;
    }
    EXPECT_EQ(NegativeIds(out), OracleMine(labels, corpus, k, scorer, threshold));
    EXPECT_LE(ledger.max_count(), threshold);
    for (const QALabel& l : out) {
      std::set<std::string> seen;
      for (const Passage& p : l.negatives) {
        EXPECT_NE(p.id, l.positive.id);
        EXPECT_TRUE(seen.insert(p.id).second);
      }
    }
  }
}

TEST(MineNegativesTest, OnlyNegativesChange) {
  std::mt19937_64 rng(1);
  auto corpus = testing::RandomCorpus(rng, 30);
  auto labels = testing::RandomLabels(rng, corpus, 10);
  OccurrenceLedger ledger(kUnboundedThreshold);
  auto out = MineNegatives(labels, corpus, 3, JaccardScorer(), ledger);
  ASSERT_EQ(out.size(), labels.size());
  for (size_t i = 0; i < out.size(); ++i) {
    QALabel copy = out[i];
    copy.negatives.clear();
    EXPECT_EQ(copy, labels[i]);
  }
}

TEST(OccurrenceLedgerTest, RefusesUseAtCap) {
  OccurrenceLedger ledger(2);
  ledger.Use("p");
  ledger.Use("p");
  EXPECT_FALSE(ledger.CanUse("p"));
  EXPECT_TRUE(ledger.CanUse("q"));
  EXPECT_THROW(ledger.Use("p"), Error);
  EXPECT_EQ(ledger.count("p"), 2);
  EXPECT_EQ(OccurrenceLedger().threshold(), 10);
}

TEST(RankingCacheTest, ComputesEachPositiveOnce) {
  std::mt19937_64 rng(5);
  auto corpus = testing::RandomCorpus(rng, 20);
  RankingCache cache;
  JaccardScorer scorer;
  const auto& r1 = cache.Get(corpus[0], corpus, scorer);
  const auto& r2 = cache.Get(corpus[0], corpus, scorer, 3);
  EXPECT_EQ(&r1, &r2);
  EXPECT_EQ(cache.size(), 1u);
  EXPECT_EQ(r1.size(), corpus.size());
  EXPECT_TRUE(std::is_sorted(r1.begin(), r1.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return corpus[a.second].id < corpus[b.second].id;
  }));
}

TEST(BuildNegativeSuitesTest, OneSuitePerKWithManifestFields) {
  std::mt19937_64 rng(12);
  auto corpus = testing::RandomCorpus(rng, 50);
  auto labels = testing::RandomLabels(rng, corpus, 20);
  auto suites = BuildNegativeSuites(labels, corpus, JaccardScorer());
  ASSERT_EQ(suites.size(), 5u);
  for (int k = 1; k <= 5; ++k) {
    const TrainingSetVariant& v = suites[k - 1];
    EXPECT_EQ(v.id, "negatives-k" + std::to_string(k));
    EXPECT_EQ(v.method, Method::kNegatives);
    EXPECT_EQ(*v.k, k);
    EXPECT_EQ(*v.threshold, 10);
    EXPECT_GE(v.generation_seconds, 0.0);
    for (const QALabel& l : v.labels) EXPECT_EQ(l.negatives.size(), static_cast<size_t>(k));
  }
  auto m = ManifestJson(suites[2]);
  EXPECT_EQ(m["method"], "negatives");
  EXPECT_EQ(m["k"], 3);
  EXPECT_EQ(m["threshold"], 10);
  EXPECT_TRUE(m.contains("seconds"));
}

TEST(BuildNegativeSuitesTest, UnboundedSuitesArePrefixConsistent) {
  std::mt19937_64 rng(13);
  auto corpus = testing::RandomCorpus(rng, 40);
  auto labels = testing::RandomLabels(rng, corpus, 15);
  auto suites = BuildNegativeSuites(labels, corpus, JaccardScorer(), {1, 2}, kUnboundedThreshold);
  EXPECT_FALSE(suites[0].threshold.has_value());
  for (size_t i = 0; i < labels.size(); ++i) {
    EXPECT_EQ(suites[0].labels[i].negatives[0], suites[1].labels[i].negatives[0]);
  }
}

TEST(BuildNegativeSuitesTest, DeterministicAndParallelSafe) {
  std::mt19937_64 rng(14);
  auto corpus = testing::RandomCorpus(rng, 60);
  auto labels = testing::RandomLabels(rng, corpus, 25);
  auto a = BuildNegativeSuites(labels, corpus, JaccardScorer(), {3}, 4, 1);
  auto b = BuildNegativeSuites(labels, corpus, JaccardScorer(), {3}, 4, 4);
  EXPECT_EQ(a[0].labels, b[0].labels);
}

TEST(BuildNegativeSuitesTest, RejectsKOutsideRange) {
  std::mt19937_64 rng(15);
  auto corpus = testing::RandomCorpus(rng, 10);
  auto labels = testing::RandomLabels(rng, corpus, 2);
  EXPECT_THROW(BuildNegativeSuites(labels, corpus, JaccardScorer(), {6}), Error);
  EXPECT_THROW(BuildNegativeSuites(labels, corpus, JaccardScorer(), {0}), Error);
}

}  // namespace
}  // namespace mrcdata

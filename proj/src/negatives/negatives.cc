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
#include <chrono>

#include "mrcdata/augment.h"
#include "mrcdata/error.h"
#include "mrcdata/text.h"

namespace mrcdata {

OccurrenceLedger::OccurrenceLedger(int threshold) : threshold_(threshold) {
  if (threshold < 1) throw Error(ErrorCode::kInvalidArgument, "threshold must be >= 1");
}

bool OccurrenceLedger::CanUse(const std::string& passage_id) const {
  return count(passage_id) < threshold_;
}

void OccurrenceLedger::Use(const std::string& passage_id) {
  int& c = counts_[passage_id];
  if (c >= threshold_) {
    throw Error(ErrorCode::kInvalidArgument, "passage " + passage_id + " is at its cap");
  }
  ++c;
}

int OccurrenceLedger::count(const std::string& passage_id) const {
  auto it = counts_.find(passage_id);
  return it == counts_.end() ? 0 : it->second;
}

int OccurrenceLedger::max_count() const {
  int m = 0;
  for (const auto& [id, c] : counts_) m = std::max(m, c);
  return m;
}

const RankingCache::Ranking& RankingCache::Get(const Passage& positive,
                                               const std::vector<Passage>& corpus,
                                               const SimilarityScorer& scorer, int jobs) {
  // Unlinked positives are keyed by content so they never collide with ids.
  std::string key = positive.id.empty()
                        ? "\x01" + std::to_string(text::Fnv1a64(positive.text))
                        : positive.id;
  auto it = rankings_.find(key);
  if (it != rankings_.end()) return it->second;

  Ranking ranking(corpus.size());
  ParallelFor(corpus.size(), scorer.serialized() ? 1 : jobs, [&](size_t i) {
    ranking[i] = {scorer.Score(positive.text, corpus[i].text), i};
  });
  std::sort(ranking.begin(), ranking.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return corpus[a.second].id < corpus[b.second].id;
  });
  return rankings_.emplace(std::move(key), std::move(ranking)).first->second;
}

std::vector<QALabel> MineNegatives(const std::vector<QALabel>& train,
                                   const std::vector<Passage>& corpus, int k,
                                   const SimilarityScorer& scorer, OccurrenceLedger& ledger,
                                   RankingCache* cache, int jobs) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  RankingCache local_cache;
  if (cache == nullptr) cache = &local_cache;

  std::vector<QALabel> out;
  out.reserve(train.size());
  for (const QALabel& source : train) {
    QALabel label = source;
    label.negatives.clear();
    const RankingCache::Ranking& ranking = cache->Get(label.positive, corpus, scorer, jobs);
    for (const auto& [score, index] : ranking) {
      if (static_cast<int>(label.negatives.size()) == k) break;
      const Passage& candidate = corpus[index];
      if (candidate.id == label.positive.id) continue;
      if (!ledger.CanUse(candidate.id)) continue;
      ledger.Use(candidate.id);
      label.negatives.push_back(candidate);
    }
    if (static_cast<int>(label.negatives.size()) < k) {
      throw Error(ErrorCode::kInsufficientNegatives,
                  "label " + label.id + " has " + std::to_string(label.negatives.size()) +
                      " eligible negatives, needs " + std::to_string(k));
    }
    out.push_back(std::move(label));
  }
  return out;
}

std::vector<TrainingSetVariant> BuildNegativeSuites(const std::vector<QALabel>& train,
                                                    const std::vector<Passage>& corpus,
                                                    const SimilarityScorer& scorer,
                                                    const std::vector<int>& ks, int threshold,
                                                    int jobs) {
  RankingCache cache;
  std::vector<TrainingSetVariant> suites;
  for (int k : ks) {
    if (k < 1 || k > 5) throw Error(ErrorCode::kInvalidArgument, "k must be in [1, 5]");
    auto start = std::chrono::steady_clock::now();
    OccurrenceLedger ledger(threshold);
    TrainingSetVariant suite;
    suite.labels = MineNegatives(train, corpus, k, scorer, ledger, &cache, jobs);
    suite.method = Method::kNegatives;
    suite.backend = scorer.name();
    suite.k = k;
    if (threshold != kUnboundedThreshold) suite.threshold = threshold;
    suite.id = "negatives-k" + std::to_string(k);
    suite.generation_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    suites.push_back(std::move(suite));
  }
  return suites;
}

}  // namespace mrcdata

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

#ifndef MRCDATA_NEGATIVES_H_
#define MRCDATA_NEGATIVES_H_

#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mrcdata/corpus.h"
#include "mrcdata/simscore.h"
#include "mrcdata/variant.h"

namespace mrcdata {

inline constexpr int kDefaultNegativeThreshold = 10;
inline constexpr int kUnboundedThreshold = std::numeric_limits<int>::max();

// Global per-passage usage counter for one mining run. No count ever exceeds
// `threshold`.
class OccurrenceLedger {
 public:
  explicit OccurrenceLedger(int threshold = kDefaultNegativeThreshold);

  bool CanUse(const std::string& passage_id) const;
  // Requires CanUse(passage_id).
  void Use(const std::string& passage_id);

  int count(const std::string& passage_id) const;
  int max_count() const;
  int threshold() const { return threshold_; }
  const std::unordered_map<std::string, int>& counts() const { return counts_; }

 private:
  int threshold_;
  std::unordered_map<std::string, int> counts_;
};

// Candidate rankings computed for a positive context, reused for every label
// that shares it and across the suites of one build. Each entry is
// (score, index into the corpus), ascending by score then passage id.
class RankingCache {
 public:
  using Ranking = std::vector<std::pair<double, size_t>>;

  const Ranking& Get(const Passage& positive, const std::vector<Passage>& corpus,
                     const SimilarityScorer& scorer, int jobs = 1);
  size_t size() const { return rankings_.size(); }

 private:
  std::unordered_map<std::string, Ranking> rankings_;
};

// For each label in input order: rank every corpus passage other than the
// label's own positive by ascending similarity to the positive (ties by
// passage id) and take the first k the ledger still allows. Throws
// Error(kInsufficientNegatives) naming the label when fewer than k remain.
std::vector<QALabel> MineNegatives(const std::vector<QALabel>& train,
                                   const std::vector<Passage>& corpus, int k,
                                   const SimilarityScorer& scorer,
                                   OccurrenceLedger& ledger,
                                   RankingCache* cache = nullptr, int jobs = 1);

// One suite per k, each mined with a fresh ledger and timed.
std::vector<TrainingSetVariant> BuildNegativeSuites(
    const std::vector<QALabel>& train, const std::vector<Passage>& corpus,
    const SimilarityScorer& scorer, const std::vector<int>& ks = {1, 2, 3, 4, 5},
    int threshold = kDefaultNegativeThreshold, int jobs = 1);

}  // namespace mrcdata

#endif  // MRCDATA_NEGATIVES_H_

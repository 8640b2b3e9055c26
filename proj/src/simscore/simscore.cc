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

#include "mrcdata/simscore.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mrcdata/error.h"
#include "mrcdata/text.h"

namespace mrcdata {

double JaccardScorer::Score(std::string_view a, std::string_view b) const {
  std::vector<std::string> ta = text::SimilarityTokens(a);
  std::vector<std::string> tb = text::SimilarityTokens(b);
  std::sort(ta.begin(), ta.end());
  ta.erase(std::unique(ta.begin(), ta.end()), ta.end());
  std::sort(tb.begin(), tb.end());
  tb.erase(std::unique(tb.begin(), tb.end()), tb.end());
  if (ta.empty() && tb.empty()) return 1.0;
  size_t common = 0;
  auto ia = ta.begin();
  auto ib = tb.begin();
  while (ia != ta.end() && ib != tb.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  size_t union_size = ta.size() + tb.size() - common;
  return static_cast<double>(common) / static_cast<double>(union_size);
}

std::unique_ptr<SimilarityScorer> MakeJaccardScorer() {
  return std::make_unique<JaccardScorer>();
}

double Rouge1Scorer::Score(std::string_view a, std::string_view b) const {
  return Rouge1F1(a, b);
}

double EmbeddingScorer::Score(std::string_view a, std::string_view b) const {
  return SentenceSimilarity(a, b, embedder_);
}

double Rouge1F1(std::string_view a, std::string_view b) {
  std::vector<std::string> ta = text::SimilarityTokens(a);
  std::vector<std::string> tb = text::SimilarityTokens(b);
  if (ta.empty() && tb.empty()) return 1.0;
  if (ta.empty() || tb.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const std::string& t : tb) ++counts[t];
  int overlap = 0;
  for (const std::string& t : ta) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  double precision = static_cast<double>(overlap) / static_cast<double>(ta.size());
  double recall = static_cast<double>(overlap) / static_cast<double>(tb.size());
  return 2.0 * precision * recall / (precision + recall);
}

double AvgPairwiseRouge1(const std::vector<std::string>& set_a,
                         const std::vector<std::string>& set_b) {
  if (set_a.size() != set_b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "question sets differ in size: " + std::to_string(set_a.size()) +
                    " vs " + std::to_string(set_b.size()));
  }
  if (set_a.empty()) return 100.0;
  double total = 0.0;
  for (size_t i = 0; i < set_a.size(); ++i) total += Rouge1F1(set_a[i], set_b[i]);
  return 100.0 * total / static_cast<double>(set_a.size());
}

std::vector<double> MeanTokenVector(std::string_view sentence,
                                    const TokenEmbedder& embedder) {
  std::vector<double> mean(embedder.dimension(), 0.0);
  std::vector<std::string> tokens = text::SimilarityTokens(sentence);
  if (tokens.empty()) return mean;
  for (const std::string& token : tokens) {
    std::vector<double> v = embedder.Embed(token);
    for (size_t i = 0; i < mean.size() && i < v.size(); ++i) mean[i] += v[i];
  }
  for (double& x : mean) x /= static_cast<double>(tokens.size());
  return mean;
}

double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double SentenceSimilarity(std::string_view a, std::string_view b,
                          const TokenEmbedder& embedder) {
  return Cosine(MeanTokenVector(a, embedder), MeanTokenVector(b, embedder));
}

double AvgSimilarityIndex(const std::vector<std::string>& variants,
                          const std::vector<std::string>& originals,
                          const TokenEmbedder& embedder) {
  if (variants.size() != originals.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "variant and original question lists differ in size");
  }
  if (variants.empty()) return 0.0;
  double total = 0.0;
  for (size_t i = 0; i < variants.size(); ++i) {
    total += SentenceSimilarity(variants[i], originals[i], embedder);
  }
  return total / static_cast<double>(variants.size());
}

}  // namespace mrcdata

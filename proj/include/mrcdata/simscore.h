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

#ifndef MRCDATA_SIMSCORE_H_
#define MRCDATA_SIMSCORE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mrcdata {

// Passage-pair similarity used to rank negative candidates. Higher is more
// similar. Bundled scorers are symmetric and thread-safe; model-backed
// adapters may be neither, in which case `serialized()` returns true and
// callers must not invoke Score concurrently.
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual double Score(std::string_view a, std::string_view b) const = 0;
  virtual std::string name() const = 0;
  virtual bool serialized() const { return false; }
};

// Jaccard similarity of lowercase token sets. Two empty texts score 1.0.
class JaccardScorer : public SimilarityScorer {
 public:
  double Score(std::string_view a, std::string_view b) const override;
  std::string name() const override { return "jaccard"; }
};

std::unique_ptr<SimilarityScorer> MakeJaccardScorer();

// Unigram-F1 scorer, handy as an alternative ordering for negatives.
class Rouge1Scorer : public SimilarityScorer {
 public:
  double Score(std::string_view a, std::string_view b) const override;
  std::string name() const override { return "rouge1"; }
};

class TokenEmbedder {
 public:
  virtual ~TokenEmbedder() = default;
  // Vector of size dimension(); unknown tokens map to the zero vector.
  virtual std::vector<double> Embed(std::string_view token) const = 0;
  virtual int dimension() const = 0;
  virtual std::string name() const = 0;
};

// Explicit token -> vector table. Also loads word2vec/GloVe text files
// ("token v1 v2 ...", one per line; an optional "count dim" header is
// skipped).
class TableEmbedder : public TokenEmbedder {
 public:
  explicit TableEmbedder(int dimension) : dimension_(dimension) {}

  void Add(std::string token, std::vector<double> vector);
  static TableEmbedder LoadText(const std::string& path);

  std::vector<double> Embed(std::string_view token) const override;
  int dimension() const override { return dimension_; }
  std::string name() const override { return "table"; }

 private:
  int dimension_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Deterministic pseudo-random unit vectors keyed by a token hash. Distinct
// tokens are close to orthogonal, so similarities track lexical overlap.
class HashEmbedder : public TokenEmbedder {
 public:
  explicit HashEmbedder(int dimension = 64, uint64_t seed = 0)
      : dimension_(dimension), seed_(seed) {}

  std::vector<double> Embed(std::string_view token) const override;
  int dimension() const override { return dimension_; }
  std::string name() const override { return "hash"; }

 private:
  int dimension_;
  uint64_t seed_;
};

// Cosine of mean token vectors under a borrowed embedder. This is the slot a
// contextual-embedding scorer fills; the embedder must outlive the scorer.
class EmbeddingScorer : public SimilarityScorer {
 public:
  explicit EmbeddingScorer(const TokenEmbedder& embedder) : embedder_(embedder) {}
  double Score(std::string_view a, std::string_view b) const override;
  std::string name() const override { return "embedding-" + embedder_.name(); }

 private:
  const TokenEmbedder& embedder_;
};

// ROUGE-1 F1 with clipped unigram counts over SimilarityTokens. Both empty
// gives 1.0, exactly one empty gives 0.0.
double Rouge1F1(std::string_view a, std::string_view b);

// 100 x mean of Rouge1F1 over index-aligned pairs. Throws kLengthMismatch.
double AvgPairwiseRouge1(const std::vector<std::string>& set_a,
                         const std::vector<std::string>& set_b);

std::vector<double> MeanTokenVector(std::string_view sentence,
                                    const TokenEmbedder& embedder);

double Cosine(const std::vector<double>& a, const std::vector<double>& b);

// Cosine of mean token vectors; 0.0 when either mean is the zero vector.
double SentenceSimilarity(std::string_view a, std::string_view b,
                          const TokenEmbedder& embedder);

// Mean SentenceSimilarity(variant[i], original[i]). Throws kLengthMismatch.
// An empty pair of lists gives 0.0.
double AvgSimilarityIndex(const std::vector<std::string>& variants,
                          const std::vector<std::string>& originals,
                          const TokenEmbedder& embedder);

}  // namespace mrcdata

#endif  // MRCDATA_SIMSCORE_H_

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

#ifndef MRCDATA_AUGMENT_H_
#define MRCDATA_AUGMENT_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrcdata/corpus.h"
#include "mrcdata/simscore.h"
#include "mrcdata/variant.h"

namespace mrcdata {

inline constexpr int kVariantsPerQuestion = 5;
inline constexpr int kParaphraseAttempts = 50;
inline constexpr int kRankedSetCount = 6;

class Paraphraser {
 public:
  virtual ~Paraphraser() = default;
  // n candidates, duplicates allowed. Deterministic for a fixed seed().
  virtual std::vector<std::string> Generate(std::string_view question, int n) const = 0;
  virtual std::string name() const = 0;
  virtual uint64_t seed() const { return 0; }
  // True if Generate must not be called concurrently.
  virtual bool serialized() const { return false; }
};

class TranslatorPair {
 public:
  virtual ~TranslatorPair() = default;
  virtual std::string Forward(std::string_view text) const = 0;
  virtual std::string Backward(std::string_view text) const = 0;
  virtual std::string pivot() const = 0;
  virtual std::string name() const = 0;
  virtual bool serialized() const { return false; }
};

class SynonymProvider {
 public:
  virtual ~SynonymProvider() = default;
  // Distinct candidates, never the keyword itself.
  virtual std::vector<std::string> Synonyms(std::string_view keyword) const = 0;
};

class KeywordExtractor {
 public:
  virtual ~KeywordExtractor() = default;
  // A lowercase token occurring in the question, if any.
  virtual std::optional<std::string> Keyword(std::string_view question) const = 0;
};

// The 25 back-translation pivots, in sweep order.
const std::array<std::string_view, 25>& PivotLanguages();
bool IsPivotLanguage(std::string_view code);

// Scans up to `max_attempts` candidates and keeps the first `want` distinct
// ones that differ from the question. Any shortfall is padded with copies of
// the original question, so the result always has `want` entries.
std::vector<std::string> UniqueParaphrases(std::string_view question,
                                           const Paraphraser& paraphraser,
                                           int want = kVariantsPerQuestion,
                                           int max_attempts = kParaphraseAttempts);

// Sets 1..5 take each question's i-th most similar variant (ties keep
// first-seen order); set 6 takes a uniformly random variant under `seed`.
// `variants[i]` must hold exactly five strings for `source[i]`.
std::vector<TrainingSetVariant> BuildRankedSets(
    const std::vector<QALabel>& source,
    const std::vector<std::vector<std::string>>& variants,
    const TokenEmbedder& embedder, uint64_t seed, const std::string& backend,
    Method method = Method::kParaphrase);

struct GenerationOptions {
  int want = kVariantsPerQuestion;
  int max_attempts = kParaphraseAttempts;
  int jobs = 1;
};

// UniqueParaphrases for every question followed by BuildRankedSets, timed.
std::vector<TrainingSetVariant> GenerateParaphraseSets(
    const std::vector<QALabel>& source, const Paraphraser& paraphraser,
    const TokenEmbedder& embedder, uint64_t seed,
    const GenerationOptions& options = {});

// Provider synonyms ranked by similarity to the keyword, descending, first
// five kept. Ties keep provider order.
std::vector<std::string> RankedSynonyms(std::string_view keyword,
                                        const SynonymProvider& provider,
                                        const TokenEmbedder& embedder);

// Replaces the first case-insensitive whole-word occurrence of `keyword`
// with `replacement`. Returns the question unchanged if absent.
std::string ReplaceKeyword(std::string_view question, std::string_view keyword,
                           std::string_view replacement);

// Five versions: the first 5 - n are the question unchanged, the remaining n
// substitute synonyms from most to least similar.
std::vector<std::string> SubstitutionVariants(std::string_view question,
                                              const KeywordExtractor& extractor,
                                              const SynonymProvider& provider,
                                              const TokenEmbedder& embedder);

std::vector<TrainingSetVariant> BuildSubstitutionSets(
    const std::vector<QALabel>& source, const KeywordExtractor& extractor,
    const SynonymProvider& provider, const TokenEmbedder& embedder, uint64_t seed,
    const std::string& backend = "table");

// question -> Backward(Forward(question)). A throwing backend leaves that
// question unchanged and bumps `warnings`.
TrainingSetVariant BackTranslateSet(const std::vector<QALabel>& source,
                                    const TranslatorPair& pair,
                                    const TokenEmbedder* embedder = nullptr);

using TranslatorFactory =
    std::function<std::unique_ptr<TranslatorPair>(std::string_view pivot)>;

std::vector<TrainingSetVariant> BackTranslationSweep(
    const std::vector<QALabel>& source, const std::vector<std::string>& pivots,
    const TranslatorFactory& factory, const TokenEmbedder* embedder = nullptr);

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

}  // namespace mrcdata

#endif  // MRCDATA_AUGMENT_H_

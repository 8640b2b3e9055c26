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

#include "mrcdata/augment.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_set>

#include "mrcdata/error.h"
#include "mrcdata/text.h"

namespace mrcdata {
namespace {

constexpr std::array<std::string_view, 25> kPivots = {
    "es", "fr", "de", "ru",  "zh", "ar",  "nl", "fi", "hu", "mul", "uk", "hi", "da",
    "cs", "roa", "bg", "ca", "af", "et", "trk", "sla", "id", "sk", "tl", "rw"};

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::string> Questions(const std::vector<QALabel>& labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const QALabel& l : labels) out.push_back(l.question);
  return out;
}

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

TrainingSetVariant VariantWithQuestions(const std::vector<QALabel>& source,
                                        const std::vector<std::string>& questions) {
  TrainingSetVariant v;
  v.labels = source;
  for (size_t i = 0; i < questions.size(); ++i) v.labels[i].question = questions[i];
  return v;
}

}  // namespace

const std::array<std::string_view, 25>& PivotLanguages() { return kPivots; }

bool IsPivotLanguage(std::string_view code) {
  return std::find(kPivots.begin(), kPivots.end(), code) != kPivots.end();
}

void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  size_t count = std::min<size_t>(static_cast<size_t>(jobs), n);
  for (size_t t = 0; t < count; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::string> UniqueParaphrases(std::string_view question,
                                           const Paraphraser& paraphraser, int want,
                                           int max_attempts) {
  if (want < 1) throw Error(ErrorCode::kInvalidArgument, "want must be >= 1");
  const std::string original(question);
  std::vector<std::string> kept;
  if (max_attempts > 0) {
    std::unordered_set<std::string> seen = {text::Normalize(original)};
    std::vector<std::string> candidates = paraphraser.Generate(question, max_attempts);
    const size_t limit = std::min(candidates.size(), static_cast<size_t>(max_attempts));
    for (size_t i = 0; i < limit && kept.size() < static_cast<size_t>(want); ++i) {
      std::string key = text::Normalize(candidates[i]);
      if (key.empty() || !seen.insert(key).second) continue;
      kept.push_back(candidates[i]);
    }
  }
  kept.resize(want, original);
  return kept;
}

std::vector<TrainingSetVariant> BuildRankedSets(
    const std::vector<QALabel>& source,
    const std::vector<std::vector<std::string>>& variants, const TokenEmbedder& embedder,
    uint64_t seed, const std::string& backend, Method method) {
  if (variants.size() != source.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one variant list per question required");
  }
  const std::vector<std::string> originals = Questions(source);
  std::vector<std::vector<std::string>> sets(kRankedSetCount,
                                             std::vector<std::string>(source.size()));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, kVariantsPerQuestion - 1);
  for (size_t q = 0; q < source.size(); ++q) {
    const std::vector<std::string>& candidates = variants[q];
    if (candidates.size() != static_cast<size_t>(kVariantsPerQuestion)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "question " + source[q].id + " has " + std::to_string(candidates.size()) +
                      " variants, expected 5");
    }
    std::vector<double> sims;
    for (const std::string& c : candidates) {
      sims.push_back(SentenceSimilarity(c, originals[q], embedder));
    }
    std::vector<int> order(kVariantsPerQuestion);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sims[a] > sims[b]; });
    for (int s = 0; s < kVariantsPerQuestion; ++s) sets[s][q] = candidates[order[s]];
    sets[kRankedSetCount - 1][q] = candidates[pick(rng)];
  }

  std::vector<TrainingSetVariant> out;
  for (int s = 0; s < kRankedSetCount; ++s) {
    TrainingSetVariant v = VariantWithQuestions(source, sets[s]);
    v.method = method;
    v.backend = backend;
    v.set_index = s + 1;
    v.seed = seed;
    v.id = std::string(MethodName(method)) + "-" + backend + "-set" + std::to_string(s + 1);
    v.avg_similarity = AvgSimilarityIndex(sets[s], originals, embedder);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<TrainingSetVariant> GenerateParaphraseSets(const std::vector<QALabel>& source,
                                                       const Paraphraser& paraphraser,
                                                       const TokenEmbedder& embedder,
                                                       uint64_t seed,
                                                       const GenerationOptions& options) {
  auto start = std::chrono::steady_clock::now();
  std::vector<std::vector<std::string>> variants(source.size());
  int jobs = paraphraser.serialized() ? 1 : options.jobs;
  ParallelFor(source.size(), jobs, [&](size_t i) {
    variants[i] = UniqueParaphrases(source[i].question, paraphraser, options.want,
                                    options.max_attempts);
  });
  std::vector<TrainingSetVariant> sets =
      BuildRankedSets(source, variants, embedder, seed, paraphraser.name());
  // One generation pass feeds all six sets; each carries an equal share.
  double seconds = SecondsSince(start) / kRankedSetCount;
  for (TrainingSetVariant& v : sets) v.generation_seconds = seconds;
  return sets;
}

std::vector<std::string> RankedSynonyms(std::string_view keyword,
                                        const SynonymProvider& provider,
                                        const TokenEmbedder& embedder) {
  const std::string key = text::ToLower(keyword);
  std::vector<std::string> candidates;
  std::unordered_set<std::string> seen = {key};
  for (const std::string& s : provider.Synonyms(keyword)) {
    std::string lower = text::ToLower(text::Trim(s));
    if (lower.empty() || !seen.insert(lower).second) continue;
    candidates.push_back(std::move(lower));
  }
  std::vector<double> sims;
  for (const std::string& c : candidates) sims.push_back(SentenceSimilarity(c, key, embedder));
  std::vector<size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return sims[a] > sims[b]; });
  std::vector<std::string> ranked;
  for (size_t i = 0; i < order.size() && i < static_cast<size_t>(kVariantsPerQuestion); ++i) {
    ranked.push_back(candidates[order[i]]);
  }
  return ranked;
}

std::string ReplaceKeyword(std::string_view question, std::string_view keyword,
                           std::string_view replacement) {
  std::string q(question);
  if (keyword.empty()) return q;
  const std::string lower_q = text::ToLower(question);
  const std::string lower_k = text::ToLower(keyword);
  size_t pos = 0;
  while ((pos = lower_q.find(lower_k, pos)) != std::string::npos) {
    size_t end = pos + lower_k.size();
    bool left_ok = pos == 0 || !IsWordChar(lower_q[pos - 1]);
    bool right_ok = end == lower_q.size() || !IsWordChar(lower_q[end]);
    if (left_ok && right_ok) {
      q.replace(pos, lower_k.size(), text::ToLower(replacement));
      return q;
    }
    ++pos;
  }
  return q;
}

namespace {

struct SubstitutionPlan {
  std::optional<std::string> keyword;
  std::vector<std::string> synonyms;  // ranked, at most five
};

SubstitutionPlan PlanSubstitution(std::string_view question, const KeywordExtractor& extractor,
                                  const SynonymProvider& provider,
                                  const TokenEmbedder& embedder) {
  SubstitutionPlan plan;
  plan.keyword = extractor.Keyword(question);
  if (plan.keyword) plan.synonyms = RankedSynonyms(*plan.keyword, provider, embedder);
  return plan;
}

std::vector<std::string> ApplyPlan(std::string_view question, const SubstitutionPlan& plan) {
  const int n = static_cast<int>(plan.synonyms.size());
  std::vector<std::string> out;
  for (int i = 1; i <= kVariantsPerQuestion; ++i) {
    if (i <= kVariantsPerQuestion - n) {
      out.emplace_back(question);
    } else {
      out.push_back(ReplaceKeyword(question, *plan.keyword,
                                   plan.synonyms[i - (kVariantsPerQuestion - n) - 1]));
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> SubstitutionVariants(std::string_view question,
                                              const KeywordExtractor& extractor,
                                              const SynonymProvider& provider,
                                              const TokenEmbedder& embedder) {
  return ApplyPlan(question, PlanSubstitution(question, extractor, provider, embedder));
}

std::vector<TrainingSetVariant> BuildSubstitutionSets(const std::vector<QALabel>& source,
                                                      const KeywordExtractor& extractor,
                                                      const SynonymProvider& provider,
                                                      const TokenEmbedder& embedder,
                                                      uint64_t seed,
                                                      const std::string& backend) {
  auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> originals = Questions(source);
  std::vector<std::vector<std::string>> sets(kRankedSetCount,
                                             std::vector<std::string>(source.size()));
  std::mt19937_64 rng(seed);
  for (size_t q = 0; q < source.size(); ++q) {
    SubstitutionPlan plan = PlanSubstitution(originals[q], extractor, provider, embedder);
    std::vector<std::string> versions = ApplyPlan(originals[q], plan);
    for (int s = 0; s < kVariantsPerQuestion; ++s) sets[s][q] = versions[s];
    if (plan.synonyms.empty()) {
      sets[kRankedSetCount - 1][q] = originals[q];
    } else {
      std::uniform_int_distribution<size_t> pick(0, plan.synonyms.size() - 1);
      sets[kRankedSetCount - 1][q] =
          ReplaceKeyword(originals[q], *plan.keyword, plan.synonyms[pick(rng)]);
    }
  }
  double seconds = SecondsSince(start) / kRankedSetCount;
  std::vector<TrainingSetVariant> out;
  for (int s = 0; s < kRankedSetCount; ++s) {
    TrainingSetVariant v = VariantWithQuestions(source, sets[s]);
    v.method = Method::kSubstitution;
    v.backend = backend;
    v.set_index = s + 1;
    v.seed = seed;
    v.id = "substitution-set" + std::to_string(s + 1);
    v.generation_seconds = seconds;
    v.avg_similarity = AvgSimilarityIndex(sets[s], originals, embedder);
    out.push_back(std::move(v));
  }
  return out;
}

TrainingSetVariant BackTranslateSet(const std::vector<QALabel>& source,
                                    const TranslatorPair& pair,
                                    const TokenEmbedder* embedder) {
  auto start = std::chrono::steady_clock::now();
  TrainingSetVariant v;
  v.labels = source;
  for (QALabel& label : v.labels) {
    try {
      std::string round_trip = pair.Backward(pair.Forward(label.question));
      if (text::Trim(round_trip).empty()) {
        ++v.warnings;
      } else {
        label.question = std::move(round_trip);
      }
    } catch (const std::exception&) {
      ++v.warnings;
    }
  }
  v.method = Method::kBackTranslation;
  v.backend = pair.name();
  v.pivot = pair.pivot();
  v.id = "backtranslation-" + pair.pivot();
  v.generation_seconds = SecondsSince(start);
  if (embedder != nullptr) {
    v.avg_similarity = AvgSimilarityIndex(Questions(v.labels), Questions(source), *embedder);
  }
  return v;
}

std::vector<TrainingSetVariant> BackTranslationSweep(const std::vector<QALabel>& source,
                                                     const std::vector<std::string>& pivots,
                                                     const TranslatorFactory& factory,
                                                     const TokenEmbedder* embedder) {
  std::vector<TrainingSetVariant> out;
  for (const std::string& pivot : pivots) {
    std::unique_ptr<TranslatorPair> pair = factory(pivot);
    out.push_back(BackTranslateSet(source, *pair, embedder));
  }
  return out;
}

}  // namespace mrcdata

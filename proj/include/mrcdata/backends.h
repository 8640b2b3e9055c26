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

#ifndef MRCDATA_BACKENDS_H_
#define MRCDATA_BACKENDS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mrcdata/augment.h"

// Deterministic, model-free backends for the augmentation interfaces. The
// table-driven ones are how precomputed model outputs get plugged in.
namespace mrcdata {

const std::unordered_set<std::string>& EnglishStopwords();

// Always returns the question itself.
class EchoParaphraser : public Paraphraser {
 public:
  std::vector<std::string> Generate(std::string_view question, int n) const override;
  std::string name() const override { return "echo"; }
};

// Cycles through a fixed pool regardless of the question.
class CyclingParaphraser : public Paraphraser {
 public:
  explicit CyclingParaphraser(std::vector<std::string> pool) : pool_(std::move(pool)) {}
  std::vector<std::string> Generate(std::string_view question, int n) const override;
  std::string name() const override { return "cycle"; }

 private:
  std::vector<std::string> pool_;
};

// Seeded surface rewrites: drops or swaps tokens and adds question frames.
// Candidates repeat, which exercises the uniqueness filter.
class RuleParaphraser : public Paraphraser {
 public:
  explicit RuleParaphraser(uint64_t seed = 0) : seed_(seed) {}
  std::vector<std::string> Generate(std::string_view question, int n) const override;
  std::string name() const override { return "rule"; }
  uint64_t seed() const override { return seed_; }

 private:
  uint64_t seed_;
};

// Precomputed paraphrases keyed by question text. JSON file shape:
// {"question": ["candidate", ...], ...}. Unknown questions echo back.
class TableParaphraser : public Paraphraser {
 public:
  TableParaphraser(std::string name, std::unordered_map<std::string, std::vector<std::string>> table)
      : name_(std::move(name)), table_(std::move(table)) {}
  static std::unique_ptr<TableParaphraser> Load(const std::string& path, std::string name);
  std::vector<std::string> Generate(std::string_view question, int n) const override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::unordered_map<std::string, std::vector<std::string>> table_;
};

class IdentityTranslator : public TranslatorPair {
 public:
  explicit IdentityTranslator(std::string pivot) : pivot_(std::move(pivot)) {}
  std::string Forward(std::string_view text) const override { return std::string(text); }
  std::string Backward(std::string_view text) const override { return std::string(text); }
  std::string pivot() const override { return pivot_; }
  std::string name() const override { return "identity"; }

 private:
  std::string pivot_;
};

// Forward and backward both reverse token order, so the round trip is the
// identity on the token sequence.
class ReversingTranslator : public TranslatorPair {
 public:
  explicit ReversingTranslator(std::string pivot) : pivot_(std::move(pivot)) {}
  std::string Forward(std::string_view text) const override;
  std::string Backward(std::string_view text) const override;
  std::string pivot() const override { return pivot_; }
  std::string name() const override { return "reverse"; }

 private:
  std::string pivot_;
};

// A lossy round trip whose losses depend on the pivot: some articles and
// auxiliaries are dropped and a few common words are swapped for near
// synonyms. Different pivots yield different question sets.
class RuleTranslator : public TranslatorPair {
 public:
  explicit RuleTranslator(std::string pivot) : pivot_(std::move(pivot)) {}
  std::string Forward(std::string_view text) const override;
  std::string Backward(std::string_view text) const override;
  std::string pivot() const override { return pivot_; }
  std::string name() const override { return "rule"; }

 private:
  std::string pivot_;
};

// Precomputed round trips: {"pivot": {"question": "back-translation"}}.
// Backward throws for questions missing from the table.
class TableTranslator : public TranslatorPair {
 public:
  TableTranslator(std::string pivot, std::unordered_map<std::string, std::string> table)
      : pivot_(std::move(pivot)), table_(std::move(table)) {}
  std::string Forward(std::string_view text) const override { return std::string(text); }
  std::string Backward(std::string_view text) const override;
  std::string pivot() const override { return pivot_; }
  std::string name() const override { return "table"; }

 private:
  std::string pivot_;
  std::unordered_map<std::string, std::string> table_;
};

TranslatorFactory MakeTableTranslatorFactory(const std::string& path);
// "identity", "reverse", "rule", or "table:<path>".
TranslatorFactory MakeTranslatorFactory(const std::string& spec);

// {"keyword": ["synonym", ...]} table. Drops the keyword itself and
// duplicates, case-insensitively.
class TableSynonymProvider : public SynonymProvider {
 public:
  TableSynonymProvider() = default;
  explicit TableSynonymProvider(std::map<std::string, std::vector<std::string>> table);
  static TableSynonymProvider Load(const std::string& path);
  std::vector<std::string> Synonyms(std::string_view keyword) const override;

 private:
  std::map<std::string, std::vector<std::string>> table_;
};

// Longest non-stopword similarity token; ties go to the leftmost.
class LongestTokenExtractor : public KeywordExtractor {
 public:
  std::optional<std::string> Keyword(std::string_view question) const override;
};

// "echo", "rule", or "table:<path>".
std::unique_ptr<Paraphraser> MakeParaphraser(const std::string& spec, uint64_t seed);

}  // namespace mrcdata

#endif  // MRCDATA_BACKENDS_H_

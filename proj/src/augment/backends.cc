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

#include "mrcdata/backends.h"

#include <algorithm>
#include <filesystem>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "mrcdata/error.h"
#include "mrcdata/io.h"
#include "mrcdata/text.h"

namespace mrcdata {

using nlohmann::json;

const std::unordered_set<std::string>& EnglishStopwords() {
  static const std::unordered_set<std::string> kStopwords = {
      "a",       "about",  "above", "after", "again", "against", "all",    "am",
      "an",      "and",    "any",   "are",   "as",    "at",      "be",     "because",
      "been",    "before", "being", "below", "between", "both",  "but",    "by",
      "can",     "could",  "did",   "do",    "does",  "doing",   "down",   "during",
      "each",    "few",    "for",   "from",  "further", "had",   "has",    "have",
      "having",  "he",     "her",   "here",  "hers",  "him",     "his",    "how",
      "i",       "if",     "in",    "into",  "is",    "it",      "its",    "itself",
      "just",    "may",    "me",    "might", "more",  "most",    "must",   "my",
      "no",      "nor",    "not",   "now",   "of",    "off",     "on",     "once",
      "only",    "or",     "other", "our",   "out",   "over",    "own",    "same",
      "she",     "should", "so",    "some",  "such",  "than",    "that",   "the",
      "their",   "them",   "then",  "there", "these", "they",    "this",   "those",
      "through", "to",     "too",   "under", "until", "up",      "very",   "was",
      "we",      "were",   "what",  "when",  "where", "which",   "while",  "who",
      "whom",    "why",    "will",  "with",  "would", "you",     "your",   "yours"};
  return kStopwords;
}

std::vector<std::string> EchoParaphraser::Generate(std::string_view question, int n) const {
  return std::vector<std::string>(std::max(n, 0), std::string(question));
}

std::vector<std::string> CyclingParaphraser::Generate(std::string_view question, int n) const {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(pool_.empty() ? std::string(question) : pool_[i % pool_.size()]);
  }
  return out;
}

std::vector<std::string> RuleParaphraser::Generate(std::string_view question, int n) const {
  static constexpr std::string_view kFrames[] = {
      "could you tell me", "i would like to know", "do you know", "please explain"};
  const std::vector<std::string> tokens = text::SplitWhitespace(question);
  std::mt19937_64 rng(seed_ ^ text::Fnv1a64(question));
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> t = tokens;
    switch (rng() % 4) {
      case 0: {
        std::vector<size_t> droppable;
        for (size_t j = 1; j < t.size(); ++j) {
          if (EnglishStopwords().count(text::ToLower(t[j])) > 0) droppable.push_back(j);
        }
        if (!droppable.empty()) t.erase(t.begin() + droppable[rng() % droppable.size()]);
        break;
      }
      case 1:
        if (t.size() > 3) {
          size_t j = 1 + rng() % (t.size() - 3);
          std::swap(t[j], t[j + 1]);
        }
        break;
      case 2:
        if (!t.empty()) {
          t.front() = text::ToLower(t.front());
          t.insert(t.begin(), std::string(kFrames[rng() % std::size(kFrames)]));
        }
        break;
      default:
        break;
    }
    out.push_back(text::Join(t, " "));
  }
  return out;
}

std::unique_ptr<TableParaphraser> TableParaphraser::Load(const std::string& path,
                                                         std::string name) {
  json obj = json::parse(io::ReadFile(path), nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw Error(ErrorCode::kParse, path + ": expected an object of question -> [paraphrase]");
  }
  std::unordered_map<std::string, std::vector<std::string>> table;
  for (auto& [question, list] : obj.items()) {
    table[question] = list.get<std::vector<std::string>>();
  }
  return std::make_unique<TableParaphraser>(std::move(name), std::move(table));
}

std::vector<std::string> TableParaphraser::Generate(std::string_view question, int n) const {
  auto it = table_.find(std::string(question));
  if (it == table_.end() || it->second.empty()) {
    return std::vector<std::string>(std::max(n, 0), std::string(question));
  }
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(it->second[i % it->second.size()]);
  return out;
}

std::string ReversingTranslator::Forward(std::string_view text) const {
  std::vector<std::string> t = text::SplitWhitespace(text);
  std::reverse(t.begin(), t.end());
  return text::Join(t, " ");
}

std::string ReversingTranslator::Backward(std::string_view text) const { return Forward(text); }

std::string RuleTranslator::Forward(std::string_view text) const {
  std::vector<std::string> t = text::SplitWhitespace(text);
  std::reverse(t.begin(), t.end());
  return "[" + pivot_ + "] " + text::Join(t, " ");
}

std::string RuleTranslator::Backward(std::string_view text) const {
  static const std::unordered_map<std::string, std::string> kSwaps = {
      {"big", "large"},        {"large", "big"},      {"common", "frequent"},
      {"important", "significant"}, {"show", "demonstrate"}, {"shows", "demonstrates"},
      {"start", "begin"},      {"begin", "start"},    {"happen", "occur"},
      {"happens", "occurs"},   {"kind", "type"},      {"kinds", "types"},
      {"need", "require"},     {"needs", "requires"}, {"often", "frequently"},
      {"main", "principal"},   {"help", "assist"},    {"helps", "assists"},
      {"get", "obtain"},       {"use", "utilize"}};
  std::vector<std::string> t = text::SplitWhitespace(text);
  const std::string tag = "[" + pivot_ + "]";
  if (t.empty() || t.front() != tag) {
    throw std::runtime_error("text was not produced by this translator");
  }
  t.erase(t.begin());
  std::reverse(t.begin(), t.end());
  std::vector<std::string> out;
  for (size_t i = 0; i < t.size(); ++i) {
    std::string lower = text::ToLower(t[i]);
    uint64_t h = text::Fnv1a64(pivot_ + ":" + lower);
    bool article = lower == "the" || lower == "a" || lower == "an";
    if (article && i > 0 && h % 2 == 0) continue;
    auto swap = kSwaps.find(lower);
    if (swap != kSwaps.end() && h % 3 == 0) {
      out.push_back(swap->second);
      continue;
    }
    out.push_back(t[i]);
  }
  return text::Join(out, " ");
}

std::string TableTranslator::Backward(std::string_view text) const {
  auto it = table_.find(std::string(text));
  if (it == table_.end()) {
    throw std::runtime_error("no back-translation for pivot " + pivot_);
  }
  return it->second;
}

TranslatorFactory MakeTableTranslatorFactory(const std::string& path) {
  json obj = json::parse(io::ReadFile(path), nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw Error(ErrorCode::kParse, path + ": expected an object of pivot -> {question: text}");
  }
  auto tables = std::make_shared<
      std::unordered_map<std::string, std::unordered_map<std::string, std::string>>>();
  for (auto& [pivot, map] : obj.items()) {
    (*tables)[pivot] = map.get<std::unordered_map<std::string, std::string>>();
  }
  return [tables](std::string_view pivot) -> std::unique_ptr<TranslatorPair> {
    auto it = tables->find(std::string(pivot));
    return std::make_unique<TableTranslator>(
        std::string(pivot),
        it == tables->end() ? std::unordered_map<std::string, std::string>() : it->second);
  };
}

TranslatorFactory MakeTranslatorFactory(const std::string& spec) {
  if (spec == "identity") {
    return [](std::string_view p) { return std::make_unique<IdentityTranslator>(std::string(p)); };
  }
  if (spec == "reverse") {
    return [](std::string_view p) { return std::make_unique<ReversingTranslator>(std::string(p)); };
  }
  if (spec == "rule") {
    return [](std::string_view p) { return std::make_unique<RuleTranslator>(std::string(p)); };
  }
  if (spec.rfind("table:", 0) == 0) return MakeTableTranslatorFactory(spec.substr(6));
  throw Error(ErrorCode::kInvalidArgument, "unknown translator backend: " + spec);
}

TableSynonymProvider::TableSynonymProvider(std::map<std::string, std::vector<std::string>> table) {
  for (auto& [key, list] : table) table_[text::ToLower(key)] = std::move(list);
}

TableSynonymProvider TableSynonymProvider::Load(const std::string& path) {
  json obj = json::parse(io::ReadFile(path), nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw Error(ErrorCode::kParse, path + ": expected an object of word -> [synonym]");
  }
  return TableSynonymProvider(obj.get<std::map<std::string, std::vector<std::string>>>());
}

std::vector<std::string> TableSynonymProvider::Synonyms(std::string_view keyword) const {
  const std::string key = text::ToLower(keyword);
  auto it = table_.find(key);
  if (it == table_.end()) return {};
  std::vector<std::string> out;
  std::unordered_set<std::string> seen = {key};
  for (const std::string& s : it->second) {
    if (seen.insert(text::ToLower(s)).second) out.push_back(s);
  }
  return out;
}

std::optional<std::string> LongestTokenExtractor::Keyword(std::string_view question) const {
  std::optional<std::string> best;
  for (std::string& token : text::SimilarityTokens(question)) {
    if (EnglishStopwords().count(token) > 0) continue;
    if (!best || token.size() > best->size()) best = std::move(token);
  }
  return best;
}

std::unique_ptr<Paraphraser> MakeParaphraser(const std::string& spec, uint64_t seed) {
  if (spec == "echo") return std::make_unique<EchoParaphraser>();
  if (spec == "rule") return std::make_unique<RuleParaphraser>(seed);
  if (spec.rfind("table:", 0) == 0) {
    std::string path = spec.substr(6);
    return TableParaphraser::Load(path, std::filesystem::path(path).stem().string());
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown paraphraser backend: " + spec);
}

}  // namespace mrcdata

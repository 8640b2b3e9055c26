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

#include "mrcdata/corpus.h"

#include <algorithm>
#include <cctype>
#include <random>
#include <unordered_set>
#include <utility>

#include "mrcdata/error.h"
#include "mrcdata/text.h"

namespace mrcdata {
namespace {

bool EndsSentence(std::string_view token) {
  if (token.empty()) return false;
  char last = token.back();
  return last == '.' || last == '?' || last == '!';
}

bool StartsSentence(std::string_view token) {
  if (token.empty()) return false;
  unsigned char first = static_cast<unsigned char>(token.front());
  return std::isupper(first) || std::isdigit(first);
}

}  // namespace

Passage Passage::Make(std::string id, std::string title, std::string text) {
  Passage p;
  p.id = std::move(id);
  p.title = std::move(title);
  p.word_count = text::WordCount(text);
  p.text = std::move(text);
  return p;
}

CleaningRules CleaningRules::Default() {
  CleaningRules rules;
  rules.strip_keywords = {
      "introduction:", "introductions:", "objective:", "objectives:",
      "conclusion:",   "conclusions:",   "method:",    "methods:",
      "background:",   "backgrounds:",   "result:",    "results:",
      "result(s):",    "aim:"};
  return rules;
}

std::vector<std::string> RuleSegmenter::Split(std::string_view text) const {
  std::vector<std::string> tokens = text::SplitWhitespace(text);
  std::vector<std::string> sentences;
  std::vector<std::string> current;
  for (size_t i = 0; i < tokens.size(); ++i) {
    current.push_back(tokens[i]);
    bool boundary = i + 1 == tokens.size() ||
                    (EndsSentence(tokens[i]) && StartsSentence(tokens[i + 1]));
    if (boundary) {
      sentences.push_back(text::Join(current, " "));
      current.clear();
    }
  }
  return sentences;
}

std::string CleanText(std::string_view input, const CleaningRules& rules) {
  std::unordered_set<std::string> keywords;
  for (const std::string& k : rules.strip_keywords) keywords.insert(text::ToLower(k));

  std::vector<std::string> kept;
  bool at_start = true;
  for (std::string& token : text::SplitWhitespace(input)) {
    if (at_start && keywords.count(text::ToLower(token)) > 0) continue;
    at_start = EndsSentence(token);
    kept.push_back(std::move(token));
  }
  std::string out = text::Join(kept, " ");
  if (rules.lowercase) out = text::ToLower(out);
  if (!rules.trim && !out.empty()) {
    if (!input.empty() && text::IsSpace(input.front())) out.insert(out.begin(), ' ');
    if (!input.empty() && text::IsSpace(input.back())) out.push_back(' ');
  }
  return out;
}

std::vector<Passage> ChunkDocument(const Document& doc, int max_words,
                                   const CleaningRules& rules,
                                   const SentenceSegmenter* segmenter) {
  if (max_words < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_words must be >= 1");
  }
  RuleSegmenter default_segmenter;
  if (segmenter == nullptr) segmenter = &default_segmenter;

  std::vector<std::vector<std::string>> chunks;
  std::vector<std::string> current;
  const size_t budget = static_cast<size_t>(max_words);
  auto flush = [&] {
    if (!current.empty()) chunks.push_back(std::move(current));
    current.clear();
  };

  for (const std::string& sentence : segmenter->Split(doc.text)) {
    std::vector<std::string> tokens = text::SplitWhitespace(CleanText(sentence, rules));
    if (tokens.empty()) continue;
    if (current.size() + tokens.size() <= budget) {
      current.insert(current.end(), tokens.begin(), tokens.end());
      continue;
    }
    flush();
    size_t pos = 0;
    while (tokens.size() - pos > budget) {
      chunks.emplace_back(tokens.begin() + pos, tokens.begin() + pos + budget);
      pos += budget;
    }
    current.assign(tokens.begin() + pos, tokens.end());
  }
  flush();

  std::string title(text::Trim(doc.title));
  std::vector<Passage> passages;
  passages.reserve(chunks.size());
  for (size_t i = 0; i < chunks.size(); ++i) {
    std::string id = chunks.size() == 1 ? doc.id : doc.id + "#" + std::to_string(i + 1);
    passages.push_back(Passage::Make(std::move(id), title, text::Join(chunks[i], " ")));
  }
  return passages;
}

IngestResult IngestCorpus(const std::vector<Document>& docs,
                          const std::vector<QALabel>& labels, int max_words,
                          const CleaningRules& rules) {
  IngestResult result;
  std::unordered_map<std::string, std::pair<size_t, size_t>> chunk_range_by_id;
  std::unordered_map<std::string, std::string> doc_id_by_text;
  std::unordered_map<std::string, std::string> cleaned_by_id;
  for (const Document& doc : docs) {
    size_t begin = result.passages.size();
    for (Passage& p : ChunkDocument(doc, max_words, rules)) {
      result.passages.push_back(std::move(p));
    }
    chunk_range_by_id[doc.id] = {begin, result.passages.size()};
    doc_id_by_text.emplace(text::Normalize(doc.text), doc.id);
    cleaned_by_id[doc.id] = CleanText(doc.text, rules);
  }

  for (const QALabel& source : labels) {
    QALabel label = source;
    std::string doc_id = label.positive.id;
    if (chunk_range_by_id.count(doc_id) == 0) {
      auto it = doc_id_by_text.find(text::Normalize(label.positive.text));
      doc_id = it == doc_id_by_text.end() ? std::string() : it->second;
    }
    auto range = chunk_range_by_id.find(doc_id);
    if (range == chunk_range_by_id.end() || range->second.first == range->second.second) {
      label.positive.id.clear();
      result.labels.push_back(std::move(label));
      continue;
    }
    auto [begin, end] = range->second;
    std::optional<size_t> hit;
    for (size_t i = begin; i < end && !hit; ++i) {
      if (AnswerInContext(label.answers, result.passages[i].text)) hit = i;
    }
    if (!hit && end - begin > 1 && AnswerInContext(label.answers, cleaned_by_id[doc_id])) {
      label.positive = result.passages[begin];
      result.fragmented.push_back(std::move(label));
      continue;
    }
    label.positive = result.passages[hit.value_or(begin)];
    result.labels.push_back(std::move(label));
  }
  return result;
}

std::string_view RejectReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kAnswerNotFound:
      return "answer_not_found";
    case RejectReason::kMissingContext:
      return "missing_context";
    case RejectReason::kEmptyAnswer:
      return "empty_answer";
  }
  return "unknown";
}

PassageIndex IndexPassages(const std::vector<Passage>& passages) {
  PassageIndex index;
  index.reserve(passages.size());
  for (const Passage& p : passages) index.emplace(p.id, p);
  return index;
}

bool AnswerInContext(const std::vector<std::string>& answers,
                     std::string_view context) {
  const std::string haystack = text::Normalize(context);
  return std::any_of(answers.begin(), answers.end(), [&](const std::string& a) {
    std::string needle = text::Normalize(a);
    return !needle.empty() && haystack.find(needle) != std::string::npos;
  });
}

ValidationResult ValidateLabels(const std::vector<QALabel>& labels,
                                const PassageIndex& passages) {
  ValidationResult result;
  for (const QALabel& label : labels) {
    auto it = label.positive.id.empty() ? passages.end()
                                        : passages.find(label.positive.id);
    if (it == passages.end()) {
      result.rejected.push_back({label, RejectReason::kMissingContext});
      continue;
    }
    bool any_answer = std::any_of(label.answers.begin(), label.answers.end(),
                                  [](const std::string& a) { return text::WordCount(a) > 0; });
    if (!any_answer) {
      result.rejected.push_back({label, RejectReason::kEmptyAnswer});
      continue;
    }
    if (!AnswerInContext(label.answers, it->second.text)) {
      result.rejected.push_back({label, RejectReason::kAnswerNotFound});
      continue;
    }
    QALabel valid = label;
    valid.positive = it->second;
    result.valid.push_back(std::move(valid));
  }
  return result;
}

SplitSizes ComputeSplitSizes(int n) {
  SplitSizes sizes;
  sizes.train = static_cast<int>((8LL * n) / 10);
  int rest = n - sizes.train;
  sizes.dev = rest / 2;
  sizes.test = rest - sizes.dev;
  return sizes;
}

DatasetSplit SplitDataset(std::vector<QALabel> labels, uint64_t seed) {
  if (labels.size() < 3) {
    throw Error(ErrorCode::kTooFewLabels,
                "need at least 3 labels, got " + std::to_string(labels.size()));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(labels.begin(), labels.end(), rng);

  SplitSizes sizes = ComputeSplitSizes(static_cast<int>(labels.size()));
  DatasetSplit split;
  split.seed = seed;
  auto first = std::make_move_iterator(labels.begin());
  split.train.assign(first, first + sizes.train);
  split.dev.assign(first + sizes.train, first + sizes.train + sizes.dev);
  split.test.assign(first + sizes.train + sizes.dev,
                    std::make_move_iterator(labels.end()));
  return split;
}

AnswerLengthStats ComputeAnswerLengthStats(const std::vector<QALabel>& labels) {
  AnswerLengthStats stats;
  long long total = 0;
  for (const QALabel& label : labels) {
    if (label.answers.empty()) continue;
    int words = text::WordCount(label.answers.front());
    if (words == 0) continue;
    ++stats.count;
    total += words;
    if (static_cast<size_t>(words) > stats.histogram.size()) stats.histogram.resize(words, 0);
    ++stats.histogram[words - 1];
  }
  if (stats.count > 0) stats.mean_words = static_cast<double>(total) / stats.count;
  return stats;
}

CorpusReport CorpusStats(const DatasetSplit& split) {
  return {ComputeAnswerLengthStats(split.train), ComputeAnswerLengthStats(split.dev),
          ComputeAnswerLengthStats(split.test)};
}

std::vector<ReviewTask> FlagLongAnswers(const std::vector<QALabel>& labels,
                                        int threshold_words) {
  if (threshold_words < 1) {
    throw Error(ErrorCode::kInvalidArgument, "threshold_words must be >= 1");
  }
  std::vector<ReviewTask> tasks;
  for (const QALabel& label : labels) {
    if (label.answers.empty()) continue;
    if (text::WordCount(label.answers.front()) <= threshold_words) continue;
    ReviewTask task;
    task.id = "t-" + label.id;
    task.label_id = label.id;
    task.question = label.question;
    task.original_answer = label.answers.front();
    task.context = label.positive.text;
    tasks.push_back(std::move(task));
  }
  std::stable_sort(tasks.begin(), tasks.end(), [](const ReviewTask& a, const ReviewTask& b) {
    int wa = a.original_words();
    int wb = b.original_words();
    if (wa != wb) return wa > wb;
    return a.label_id < b.label_id;
  });
  return tasks;
}

std::vector<ReviewTask> FlagLongAnswers(const DatasetSplit& split,
                                        int threshold_words) {
  std::vector<QALabel> all = split.train;
  all.insert(all.end(), split.dev.begin(), split.dev.end());
  all.insert(all.end(), split.test.begin(), split.test.end());
  return FlagLongAnswers(all, threshold_words);
}

}  // namespace mrcdata

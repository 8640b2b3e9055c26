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

#ifndef MRCDATA_CORPUS_H_
#define MRCDATA_CORPUS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mrcdata/review_task.h"

namespace mrcdata {

inline constexpr int kDefaultMaxWords = 300;

// A corpus chunk and the retrieval unit. `text` is cleaned and lowercase,
// and `word_count` always matches its whitespace token count.
struct Passage {
  std::string id;
  std::string title;
  std::string text;
  int word_count = 0;

  static Passage Make(std::string id, std::string title, std::string text);
  bool operator==(const Passage&) const = default;
};

// question / answers / positive context, plus the mined negatives.
struct QALabel {
  std::string id;
  std::string question;
  std::vector<std::string> answers;
  Passage positive;
  std::vector<Passage> negatives;

  bool operator==(const QALabel&) const = default;
};

struct DatasetSplit {
  std::vector<QALabel> train;
  std::vector<QALabel> dev;
  std::vector<QALabel> test;
  uint64_t seed = 0;
};

struct SplitSizes {
  int train = 0;
  int dev = 0;
  int test = 0;
};

struct CleaningRules {
  // Matched case-insensitively against whole tokens at the start of the
  // passage or of a sentence.
  std::vector<std::string> strip_keywords;
  bool lowercase = true;
  bool trim = true;

  // The COVID-QA section-heading list, lowercase and trim enabled.
  static CleaningRules Default();
};

// Raw input document before cleaning and chunking.
struct Document {
  std::string id;
  std::string title;
  std::string text;
};

class SentenceSegmenter {
 public:
  virtual ~SentenceSegmenter() = default;
  // Returns sentences in order; joining them with single spaces must give
  // back the whitespace-token sequence of `text`.
  virtual std::vector<std::string> Split(std::string_view text) const = 0;
};

// Breaks after [.?!] when followed by whitespace and then an uppercase
// letter or a digit.
class RuleSegmenter : public SentenceSegmenter {
 public:
  std::vector<std::string> Split(std::string_view text) const override;
};

std::string CleanText(std::string_view text, const CleaningRules& rules);

// Cleans `doc` and packs its sentences greedily into passages of at most
// `max_words` tokens. Sentences longer than `max_words` are hard-split.
// A document producing a single chunk keeps its id; otherwise chunk ids are
// "<doc id>#<n>" with n starting at 1.
std::vector<Passage> ChunkDocument(
    const Document& doc, int max_words,
    const CleaningRules& rules = CleaningRules::Default(),
    const SentenceSegmenter* segmenter = nullptr);

enum class RejectReason { kAnswerNotFound, kMissingContext, kEmptyAnswer };
std::string_view RejectReasonName(RejectReason reason);

struct Rejection {
  QALabel label;
  RejectReason reason;
};

struct ValidationResult {
  std::vector<QALabel> valid;
  std::vector<Rejection> rejected;
};

using PassageIndex = std::unordered_map<std::string, Passage>;

PassageIndex IndexPassages(const std::vector<Passage>& passages);

// True if any non-empty answer occurs in `context` after Normalize().
bool AnswerInContext(const std::vector<std::string>& answers,
                     std::string_view context);

// A label is kept iff its positive passage id resolves in `passages` and some
// answer occurs in that passage's text after shared normalization.
ValidationResult ValidateLabels(const std::vector<QALabel>& labels,
                                const PassageIndex& passages);

SplitSizes ComputeSplitSizes(int n);

// 80:10:10 after a seeded shuffle. Throws Error(kTooFewLabels) if n < 3.
DatasetSplit SplitDataset(std::vector<QALabel> labels, uint64_t seed);

struct AnswerLengthStats {
  int count = 0;
  // Absent for an empty split.
  std::optional<double> mean_words;
  // histogram[i] counts first answers of exactly i + 1 words; covers [1, max].
  std::vector<int> histogram;
};

AnswerLengthStats ComputeAnswerLengthStats(const std::vector<QALabel>& labels);

struct CorpusReport {
  AnswerLengthStats train;
  AnswerLengthStats dev;
  AnswerLengthStats test;
};

CorpusReport CorpusStats(const DatasetSplit& split);

struct IngestResult {
  std::vector<Passage> passages;
  // Labels re-pointed at the chunk that holds their answer.
  std::vector<QALabel> labels;
  // Labels whose answer occurs in the cleaned source document but straddles a
  // chunk boundary. These need manual repair rather than silent removal.
  std::vector<QALabel> fragmented;
};

// Chunks every document and re-points each label's positive context at the
// first chunk containing one of its answers. A label's source document is
// found by positive passage id, falling back to normalized text. Labels
// whose source is unknown keep an empty positive id so that ValidateLabels
// reports them as missing_context.
IngestResult IngestCorpus(const std::vector<Document>& docs,
                          const std::vector<QALabel>& labels, int max_words,
                          const CleaningRules& rules = CleaningRules::Default());

// One pending task per label whose first answer is longer than
// `threshold_words`, longest first and ties by label id.
std::vector<ReviewTask> FlagLongAnswers(const std::vector<QALabel>& labels,
                                        int threshold_words);
std::vector<ReviewTask> FlagLongAnswers(const DatasetSplit& split,
                                        int threshold_words);

}  // namespace mrcdata

#endif  // MRCDATA_CORPUS_H_

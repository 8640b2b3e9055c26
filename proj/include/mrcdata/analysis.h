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

#ifndef MRCDATA_ANALYSIS_H_
#define MRCDATA_ANALYSIS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mrcdata/corpus.h"
#include "mrcdata/harness.h"
#include "mrcdata/variant.h"

namespace mrcdata {

// Index-aligned question lists, one per method, in display order.
struct MethodQuestionSets {
  std::vector<std::string> methods;
  std::vector<std::vector<std::string>> questions;

  void Add(std::string method, std::vector<std::string> list);
};

// Full symmetric matrix of average ROUGE-1 (0..100); rendered lower-triangular
// with two decimals.
struct SimilarityMatrix {
  std::vector<std::string> methods;
  std::vector<std::vector<double>> cells;

  std::string ToCsv() const;
  std::string ToMarkdown() const;
};

// Throws kInvalidArgument for fewer than two methods and kLengthMismatch for
// misaligned lists.
SimilarityMatrix MethodSimilarityMatrix(const MethodQuestionSets& sets);

struct LengthReport {
  std::optional<double> mean_before;
  std::optional<double> mean_after;
  // Both series have the same length; index i is answers of i + 1 words.
  std::vector<int> before;
  std::vector<int> after;

  std::string ToCsv() const;       // words,before,after
  std::string ToMarkdown() const;  // means with two decimals
};

// First-answer lengths before and after shortening. Label ids must match
// position by position (kInvalidArgument otherwise).
LengthReport MakeLengthReport(const std::vector<QALabel>& before,
                              const std::vector<QALabel>& after);

// Static charts. The bundled plotter writes SVG.
class Plotter {
 public:
  virtual ~Plotter() = default;
  virtual void GroupedBars(const std::filesystem::path& path, const std::string& title,
                           const std::vector<std::string>& categories,
                           const std::vector<std::pair<std::string, std::vector<int>>>& series) = 0;
};

class SvgPlotter : public Plotter {
 public:
  void GroupedBars(const std::filesystem::path& path, const std::string& title,
                   const std::vector<std::string>& categories,
                   const std::vector<std::pair<std::string, std::vector<int>>>& series) override;
};

// A ledger per dataset; datasets become columns.
using DatasetLedgers = std::vector<std::pair<std::string, ScoreLedger>>;

enum class TableFormat { kMarkdown, kCsv };

// Rows: baseline, negatives, paraphrasing, word substitution, back
// translation, answer shortening, continual, augmentation; only rows present
// in some ledger are emitted. A cell holds the best metric of that family,
// "FAILED" when all its runs failed, "N/A" when not applicable and "-" when
// absent. In Markdown each cell carries its delta and the best cell of each
// column is bold.
std::string RenderResultsTable(const DatasetLedgers& ledgers, EvalMode style,
                               TableFormat format = TableFormat::kMarkdown);

// Hours with one decimal and relative change in percent per family, for
// example "4.9 (+33%)". Continual/augmentation rows are stage-only.
std::string RenderCostTable(const DatasetLedgers& ledgers, EvalMode style,
                            TableFormat format = TableFormat::kMarkdown);

// Every variant of one family as its own row plus the baseline. For the
// negatives family a trailing "generation time" row sums generation hours.
std::string RenderVariantTable(const DatasetLedgers& ledgers, const std::string& family);

// Mean and sample std of every metric in a family, as "47.1 ± 1.0".
std::string RenderMeanStdTable(const DatasetLedgers& ledgers,
                               const std::vector<std::string>& families);

// Average similarity index per set (columns 1..6) for each (method, backend)
// group of variants, three decimals.
std::string RenderSimilarityIndexTable(const std::vector<TrainingSetVariant>& variants);

std::string FormatFixed(double value, int digits);

}  // namespace mrcdata

#endif  // MRCDATA_ANALYSIS_H_

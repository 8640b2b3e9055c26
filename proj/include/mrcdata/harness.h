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

#ifndef MRCDATA_HARNESS_H_
#define MRCDATA_HARNESS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mrcdata/corpus.h"
#include "mrcdata/variant.h"

namespace mrcdata {

enum class EvalMode { kRetrieval, kReader };

std::string_view EvalModeName(EvalMode mode);
std::optional<EvalMode> ParseEvalMode(std::string_view name);

// Fine-tuning hyperparameters. Defaults are the retrieval values; use
// ForMode() to get the reader or continual variants.
struct Hyperparams {
  int batch_size = 32;
  int dev_batch_size = 32;
  double adam_eps = 1e-8;
  std::pair<double, double> adam_betas = {0.9, 0.999};
  double max_grad_norm = 1.0;
  double weight_decay = 0.0;
  double learning_rate = 1e-5;
  int warmup_steps = 100;
  int gradient_accumulation_steps = 1;
  int num_train_epochs = 30;
  int eval_step = 50;
  int log_batch_step = 100;
  int train_rolling_loss_step = 100;
  int other_negatives = 1;
  int hard_negatives = 0;
  int val_av_rank_hard_neg = 0;
  int val_av_rank_other_neg = 10;
  int val_av_rank_bsz = 128;
  int val_av_rank_max_qs = 10000;
  int eval_per_epoch = 1;

  // Retrieval: 100 warmup steps, 30 epochs (60 continual).
  // Reader: 0 warmup steps, 10 epochs (30 continual).
  static Hyperparams ForMode(EvalMode mode, bool continual = false);

  nlohmann::ordered_json ToJson() const;
  // Overrides fields present in `overrides`. Unknown keys and non-positive
  // values for positive fields throw Error(kInvalidArgument).
  void Apply(const nlohmann::json& overrides);
};

struct FineTuneResult {
  std::string checkpoint;  // opaque, resolved by the trainer backend
  double seconds = 0.0;
};

class Trainer {
 public:
  virtual ~Trainer() = default;
  virtual FineTuneResult FineTune(const std::string& start_checkpoint,
                                  const TrainingSetVariant& training_set,
                                  const Hyperparams& hyperparams, EvalMode mode) = 0;
  // Top-1 passage id per test question.
  virtual std::vector<std::string> EvaluateRetrieval(const std::string& checkpoint,
                                                     const std::vector<QALabel>& test) = 0;
  // Predicted answer string per test question.
  virtual std::vector<std::string> EvaluateReader(const std::string& checkpoint,
                                                  const std::vector<QALabel>& test) = 0;
  virtual std::string name() const = 0;
};

// Round half away from zero to one decimal place.
double Round1(double value);

// 100 * matches / N, rounded to one decimal. Throws kLengthMismatch.
double RecallAt1(const std::vector<std::string>& top1, const std::vector<std::string>& gold);

// A prediction matches when Normalize(prediction) equals Normalize(g) for any
// gold answer g. 100 * matches / N, one decimal. Throws kLengthMismatch.
double ExactMatch(const std::vector<std::string>& predictions,
                  const std::vector<std::vector<std::string>>& golds);

// Runs the mode's evaluation and scores it against the test labels.
double Evaluate(Trainer& trainer, const std::string& checkpoint,
                const std::vector<QALabel>& test, EvalMode mode);

enum class Outcome { kBaseline, kImproved, kEqual, kWorse, kFailed, kNotApplicable };
std::string_view OutcomeName(Outcome outcome);
std::optional<Outcome> ParseOutcome(std::string_view name);

// Row families used for grouping and ordering.
inline constexpr std::string_view kFamilyBaseline = "baseline";
inline constexpr std::string_view kFamilyContinual = "continual";
inline constexpr std::string_view kFamilyAugmentation = "augmentation";
std::string FamilyOf(Method method);

struct LedgerRow {
  std::string variant_id;
  std::string method;  // family
  std::optional<double> metric;  // percent, one decimal; absent when failed or N/A
  double delta = 0.0;
  Outcome outcome = Outcome::kEqual;
  double ft_seconds = 0.0;
  double gen_seconds = 0.0;
  std::string checkpoint;  // in-memory only
};

// Per-variant results for one dataset and mode. Exactly one baseline row,
// which must be added before any other row. Outcomes are decided on the
// one-decimal delta.
class ScoreLedger {
 public:
  ScoreLedger() = default;

  void SetBaseline(std::string id, double metric, double ft_seconds, double gen_seconds = 0.0,
                   std::string checkpoint = {});
  const LedgerRow& AddResult(std::string id, std::string method, double metric,
                             double ft_seconds, double gen_seconds = 0.0,
                             std::string checkpoint = {});
  const LedgerRow& AddFailure(std::string id, std::string method, double ft_seconds = 0.0,
                              double gen_seconds = 0.0);
  const LedgerRow& AddNotApplicable(std::string id, std::string method);

  const LedgerRow* baseline() const;
  const LedgerRow* Find(std::string_view id) const;
  const std::vector<LedgerRow>& rows() const { return rows_; }

  // Columns: variant_id,method,metric,delta,class,ft_seconds,gen_seconds
  std::string ToCsv() const;
  static ScoreLedger FromCsv(std::string_view csv);

 private:
  void RequireNewRow(const std::string& id) const;

  std::vector<LedgerRow> rows_;
};

struct SuiteOptions {
  Hyperparams hyperparams;  // other_negatives is set from each negatives suite's k
};

// Fine-tunes from `start_checkpoint` on the original set (baseline row) and
// then on each variant. A throwing trainer marks that row failed; the suite
// continues. A failed baseline propagates.
ScoreLedger RunIndividualSuite(const std::string& start_checkpoint,
                               const TrainingSetVariant& original,
                               const std::vector<TrainingSetVariant>& variants,
                               Trainer& trainer, const std::vector<QALabel>& test,
                               EvalMode mode, const SuiteOptions& options);

// Ids of improved rows (delta > 0 at one decimal), delta descending, ties by
// id. With one_per_family only the best row of each method family is kept.
// Baseline, continual and augmentation rows never qualify.
std::vector<std::string> PlanContinual(const ScoreLedger& ledger, bool one_per_family = true);

struct ContinualResult {
  double metric = 0.0;
  std::string checkpoint;
  double seconds = 0.0;  // fine-tuning time of the chain only
};

// Chains fine-tuning through `plan`; each stage starts from the previous
// checkpoint. Throws Error(kNoImprovingSets) for an empty plan.
ContinualResult RunContinual(const std::vector<std::string>& plan,
                             const std::string& start_checkpoint,
                             const std::map<std::string, const TrainingSetVariant*>& variants,
                             Trainer& trainer, const Hyperparams& hyperparams,
                             const std::vector<QALabel>& test, EvalMode mode);

// Concatenates labels in input order without deduplication. Throws
// Error(kNoImprovingSets) for empty input.
TrainingSetVariant ConcatAugmented(const std::vector<const TrainingSetVariant*>& variants,
                                   std::string id = "augmentation");

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Mean and sample standard deviation (n - 1), both rounded to one decimal.
// A single value has std 0. Throws Error(kEmptyInput).
MeanStd SummarizeScores(const std::vector<double>& values);

// round(100 * |best - baseline| / baseline); the sign is reported separately.
int RelativeChangePercent(double baseline, double best);

struct CostRow {
  std::string family;
  double hours = 0.0;       // fine-tuning hours, one decimal
  double gen_hours = 0.0;   // generation hours, one decimal
  std::optional<double> best_metric;
  int relative_percent = 0;
  Outcome outcome = Outcome::kEqual;
  bool stage_only = false;  // continual / augmentation rows
};

// One row per family in ledger order, baseline first. Throws
// kInvalidArgument when the baseline metric is not positive.
std::vector<CostRow> CostBenefit(const ScoreLedger& ledger);

}  // namespace mrcdata

#endif  // MRCDATA_HARNESS_H_

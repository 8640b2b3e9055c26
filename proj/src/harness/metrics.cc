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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrcdata/error.h"
#include "mrcdata/harness.h"
#include "mrcdata/text.h"

namespace mrcdata {

std::string_view EvalModeName(EvalMode mode) {
  return mode == EvalMode::kRetrieval ? "retrieval" : "reader";
}

std::optional<EvalMode> ParseEvalMode(std::string_view name) {
  if (name == "retrieval") return EvalMode::kRetrieval;
  if (name == "reader") return EvalMode::kReader;
  return std::nullopt;
}

double Round1(double value) { return std::round(value * 10.0) / 10.0; }

namespace {

double Percent(size_t matches, size_t n) {
  if (n == 0) return 0.0;
  // Integer tenths, half rounded up, so exact ties never depend on float error.
  const unsigned long long tenths = (2000ULL * matches + n) / (2ULL * n);
  return static_cast<double>(tenths) / 10.0;
}

}  // namespace

double RecallAt1(const std::vector<std::string>& top1, const std::vector<std::string>& gold) {
  if (top1.size() != gold.size()) {
    throw Error(ErrorCode::kLengthMismatch, "top-1 and gold lists differ in size");
  }
  size_t matches = 0;
  for (size_t i = 0; i < top1.size(); ++i) matches += top1[i] == gold[i] ? 1 : 0;
  return Percent(matches, top1.size());
}

double ExactMatch(const std::vector<std::string>& predictions,
                  const std::vector<std::vector<std::string>>& golds) {
  if (predictions.size() != golds.size()) {
    throw Error(ErrorCode::kLengthMismatch, "prediction and gold lists differ in size");
  }
  size_t matches = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const std::string p = text::Normalize(predictions[i]);
    bool hit = std::any_of(golds[i].begin(), golds[i].end(),
                           [&](const std::string& g) { return text::Normalize(g) == p; });
    matches += hit ? 1 : 0;
  }
  return Percent(matches, predictions.size());
}

double Evaluate(Trainer& trainer, const std::string& checkpoint,
                const std::vector<QALabel>& test, EvalMode mode) {
  if (mode == EvalMode::kRetrieval) {
    std::vector<std::string> gold;
    for (const QALabel& l : test) gold.push_back(l.positive.id);
    return RecallAt1(trainer.EvaluateRetrieval(checkpoint, test), gold);
  }
  std::vector<std::vector<std::string>> golds;
  for (const QALabel& l : test) golds.push_back(l.answers);
  return ExactMatch(trainer.EvaluateReader(checkpoint, test), golds);
}

MeanStd SummarizeScores(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "no scores to summarize");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
  return {Round1(mean), Round1(sd)};
}

int RelativeChangePercent(double baseline, double best) {
  if (baseline <= 0.0) throw Error(ErrorCode::kInvalidArgument, "baseline must be positive");
  // Work in tenths so one-decimal inputs subtract exactly.
  const long long diff = std::llabs(std::llround(best * 10.0) - std::llround(baseline * 10.0));
  return static_cast<int>(std::lround(100.0 * static_cast<double>(diff) / (baseline * 10.0)));
}

}  // namespace mrcdata

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

#ifndef MRCDATA_STUB_TRAINER_H_
#define MRCDATA_STUB_TRAINER_H_

#include <map>
#include <optional>
#include <set>
#include <string>

#include "mrcdata/harness.h"

namespace mrcdata {

// CPU-only Trainer whose scores are a pure function of the training set and
// an injected table. Checkpoint handles are self-describing
// ("stub:<score>:<fingerprint>"), so they survive across processes. Any
// other handle is treated as the pretrained start with `base_score`.
class StubTrainer : public Trainer {
 public:
  struct Options {
    double base_score = 50.0;
    // Score after fine-tuning the start checkpoint on the variant with this id.
    std::map<std::string, double> table;
    // Added per stage when fine-tuning from a stub checkpoint.
    double stage_increment = 0.5;
    double seconds_per_label_epoch = 0.01;
    // Variant ids whose fine-tuning throws.
    std::set<std::string> failing;
  };

  StubTrainer() = default;
  explicit StubTrainer(Options options) : options_(std::move(options)) {}

  // {"base_score": x, "table": {...}, "stage_increment": x,
  //  "seconds_per_label_epoch": x, "failing": [...]}
  static Options OptionsFromJson(const nlohmann::json& obj);

  FineTuneResult FineTune(const std::string& start_checkpoint,
                          const TrainingSetVariant& training_set,
                          const Hyperparams& hyperparams, EvalMode mode) override;
  std::vector<std::string> EvaluateRetrieval(const std::string& checkpoint,
                                             const std::vector<QALabel>& test) override;
  std::vector<std::string> EvaluateReader(const std::string& checkpoint,
                                          const std::vector<QALabel>& test) override;
  std::string name() const override { return "stub"; }

  // Score encoded in a stub handle, or nullopt for other handles.
  static std::optional<double> DecodeScore(const std::string& checkpoint);

 private:
  double ScoreOf(const std::string& checkpoint) const;
  size_t Matches(const std::string& checkpoint, size_t n) const;

  Options options_;
};

}  // namespace mrcdata

#endif  // MRCDATA_STUB_TRAINER_H_

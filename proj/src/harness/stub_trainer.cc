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

#include "mrcdata/stub_trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mrcdata/error.h"
#include "mrcdata/text.h"

namespace mrcdata {
namespace {

constexpr char kPrefix[] = "stub:";
constexpr char kMiss[] = "<miss>";

}  // namespace

StubTrainer::Options StubTrainer::OptionsFromJson(const nlohmann::json& obj) {
  if (!obj.is_object()) throw Error(ErrorCode::kInvalidArgument, "stub trainer options must be an object");
  Options o;
  try {
    for (const auto& [key, value] : obj.items()) {
      if (key == "base_score") {
        o.base_score = value.get<double>();
      } else if (key == "table") {
        o.table = value.get<std::map<std::string, double>>();
      } else if (key == "stage_increment") {
        o.stage_increment = value.get<double>();
      } else if (key == "seconds_per_label_epoch") {
        o.seconds_per_label_epoch = value.get<double>();
      } else if (key == "failing") {
        o.failing = value.get<std::set<std::string>>();
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown stub trainer option \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("stub trainer options: ") + e.what());
  }
  return o;
}

std::optional<double> StubTrainer::DecodeScore(const std::string& checkpoint) {
  if (checkpoint.rfind(kPrefix, 0) != 0) return std::nullopt;
  size_t start = sizeof(kPrefix) - 1;
  size_t end = checkpoint.find(':', start);
  try {
    return std::stod(checkpoint.substr(start, end - start));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

FineTuneResult StubTrainer::FineTune(const std::string& start_checkpoint,
                                     const TrainingSetVariant& training_set,
                                     const Hyperparams& hyperparams, EvalMode /*mode*/) {
  if (options_.failing.count(training_set.id) > 0) {
    throw std::runtime_error("stub trainer configured to fail on " + training_set.id);
  }
  const std::string fingerprint = Fingerprint(training_set.labels);
  double score;
  if (auto prev = DecodeScore(start_checkpoint)) {
    score = *prev + options_.stage_increment;
  } else if (auto it = options_.table.find(training_set.id); it != options_.table.end()) {
    score = it->second;
  } else if (training_set.method == Method::kOriginal) {
    score = options_.base_score;
  } else {
    int offset = static_cast<int>(text::Fnv1a64(fingerprint) % 61) - 30;
    score = options_.base_score + offset / 10.0;
  }
  score = std::clamp(Round1(score), 0.0, 100.0);

  char handle[96];
  std::snprintf(handle, sizeof(handle), "%s%.1f:%s", kPrefix, score, fingerprint.c_str());
  FineTuneResult r;
  r.checkpoint = handle;
  r.seconds = static_cast<double>(training_set.labels.size()) * hyperparams.num_train_epochs *
              options_.seconds_per_label_epoch;
  return r;
}

double StubTrainer::ScoreOf(const std::string& checkpoint) const {
  return DecodeScore(checkpoint).value_or(options_.base_score);
}

size_t StubTrainer::Matches(const std::string& checkpoint, size_t n) const {
  double m = std::round(ScoreOf(checkpoint) * static_cast<double>(n) / 100.0);
  return std::min(n, static_cast<size_t>(std::max(0.0, m)));
}

std::vector<std::string> StubTrainer::EvaluateRetrieval(const std::string& checkpoint,
                                                        const std::vector<QALabel>& test) {
  const size_t matches = Matches(checkpoint, test.size());
  std::vector<std::string> out;
  for (size_t i = 0; i < test.size(); ++i) {
    out.push_back(i < matches ? test[i].positive.id : kMiss);
  }
  return out;
}

std::vector<std::string> StubTrainer::EvaluateReader(const std::string& checkpoint,
                                                     const std::vector<QALabel>& test) {
  const size_t matches = Matches(checkpoint, test.size());
  std::vector<std::string> out;
  for (size_t i = 0; i < test.size(); ++i) {
    out.push_back(i < matches && !test[i].answers.empty() ? test[i].answers.front()
                                                          : std::string(kMiss));
  }
  return out;
}

}  // namespace mrcdata

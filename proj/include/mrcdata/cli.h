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

#ifndef MRCDATA_CLI_H_
#define MRCDATA_CLI_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrcdata/corpus.h"
#include "mrcdata/harness.h"
#include "mrcdata/simscore.h"

namespace mrcdata::cli {

struct DatasetPaths {
  std::string documents;
  std::string labels;
  int answer_review_threshold = 30;
};

struct PipelineConfig {
  std::map<std::string, DatasetPaths> datasets;
  int max_words = kDefaultMaxWords;
  int neg_threshold = 10;  // kUnboundedThreshold when the JSON value is null
  int answer_review_threshold = 30;
  uint64_t seed = 0;
  int jobs = 1;
  std::string paraphraser = "rule";
  std::string translator = "rule";
  std::string embedder = "hash";
  std::string scorer = "jaccard";
  std::string trainer = "stub";
  nlohmann::json trainer_options = nlohmann::json::object();
  std::string synonyms;
  std::string start_checkpoint = "pretrained";
  // {"retrieval": {...}, "reader": {...}} applied on top of the mode defaults.
  nlohmann::json hyperparams = nlohmann::json::object();
  CleaningRules cleaning = CleaningRules::Default();

  // Rejects unknown keys and ill-typed values with Error(kInvalidArgument).
  static PipelineConfig FromJson(const nlohmann::json& j);
  static PipelineConfig Load(const std::filesystem::path& path);
  nlohmann::ordered_json ToJson() const;
  // 16 hex digits over the canonical JSON form.
  std::string Hash() const;

  Hyperparams HyperparamsFor(EvalMode mode, bool continual) const;
  int ReviewThreshold(const std::string& dataset) const;
};

std::unique_ptr<TokenEmbedder> MakeEmbedder(const std::string& spec, uint64_t seed);
std::unique_ptr<SimilarityScorer> MakeScorer(const std::string& spec,
                                             const TokenEmbedder& embedder);
std::unique_ptr<Trainer> MakeTrainer(const std::string& spec, const nlohmann::json& options);

// Exit codes: 0 success, 1 runtime error, 2 usage, validation or missing
// input.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Every subcommand path (e.g. "gen negatives") with the long flags it takes.
std::map<std::string, std::vector<std::string>> CommandFlags();
std::string HelpText(const std::string& command_path);

}  // namespace mrcdata::cli

#endif  // MRCDATA_CLI_H_

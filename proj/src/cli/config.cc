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

#include <cstdio>
#include <set>

#include "mrcdata/backends.h"
#include "mrcdata/cli.h"
#include "mrcdata/error.h"
#include "mrcdata/io.h"
#include "mrcdata/negatives.h"
#include "mrcdata/stub_trainer.h"
#include "mrcdata/text.h"

namespace mrcdata::cli {

using json = nlohmann::json;

namespace {

[[noreturn]] void Bad(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, "config: " + message);
}

void CheckKeys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) Bad(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) Bad("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T Get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    Bad("'" + key + "' in " + where + " has the wrong type");
  }
}

int PositiveInt(const json& obj, const std::string& key) {
  int v = Get<int>(obj, key, "config");
  if (v < 1) Bad("'" + key + "' must be >= 1");
  return v;
}

}  // namespace

PipelineConfig PipelineConfig::FromJson(const json& j) {
  CheckKeys(j,
            {"datasets", "max_words", "neg_threshold", "answer_review_threshold", "seed", "jobs",
             "paraphraser", "translator", "embedder", "scorer", "trainer", "trainer_options",
             "synonyms", "start_checkpoint", "hyperparams", "cleaning"},
            "config");
  PipelineConfig c;
  if (j.contains("datasets")) {
    if (!j["datasets"].is_object()) Bad("datasets must be an object");
    for (const auto& [name, entry] : j["datasets"].items()) {
      std::string where = "datasets." + name;
      CheckKeys(entry, {"documents", "labels", "answer_review_threshold"}, where);
      DatasetPaths d;
      if (entry.contains("documents")) d.documents = Get<std::string>(entry, "documents", where);
      if (entry.contains("labels")) d.labels = Get<std::string>(entry, "labels", where);
      if (entry.contains("answer_review_threshold")) {
        d.answer_review_threshold = Get<int>(entry, "answer_review_threshold", where);
        if (d.answer_review_threshold < 1) Bad(where + ".answer_review_threshold must be >= 1");
      }
      c.datasets[name] = d;
    }
  }
  if (j.contains("max_words")) c.max_words = PositiveInt(j, "max_words");
  if (j.contains("neg_threshold")) {
    c.neg_threshold = j["neg_threshold"].is_null() ? kUnboundedThreshold
                                                   : PositiveInt(j, "neg_threshold");
  }
  if (j.contains("answer_review_threshold")) {
    c.answer_review_threshold = PositiveInt(j, "answer_review_threshold");
  }
  if (j.contains("seed")) c.seed = Get<uint64_t>(j, "seed", "config");
  if (j.contains("jobs")) c.jobs = PositiveInt(j, "jobs");
  for (auto [key, field] : {std::pair<const char*, std::string*>{"paraphraser", &c.paraphraser},
                            {"translator", &c.translator},
                            {"embedder", &c.embedder},
                            {"scorer", &c.scorer},
                            {"trainer", &c.trainer},
                            {"synonyms", &c.synonyms},
                            {"start_checkpoint", &c.start_checkpoint}}) {
    if (j.contains(key)) *field = Get<std::string>(j, key, "config");
  }
  if (j.contains("trainer_options")) {
    if (!j["trainer_options"].is_object()) Bad("trainer_options must be an object");
    c.trainer_options = j["trainer_options"];
    if (c.trainer == "stub") StubTrainer::OptionsFromJson(c.trainer_options);
  }
  if (j.contains("hyperparams")) {
    CheckKeys(j["hyperparams"], {"retrieval", "reader"}, "hyperparams");
    c.hyperparams = j["hyperparams"];
    for (EvalMode mode : {EvalMode::kRetrieval, EvalMode::kReader}) {
      try {
        c.HyperparamsFor(mode, false);
      } catch (const Error& e) {
        Bad(std::string("hyperparams: ") + e.what());
      }
    }
  }
  if (j.contains("cleaning")) {
    const json& cl = j["cleaning"];
    CheckKeys(cl, {"strip_keywords", "lowercase", "trim"}, "cleaning");
    if (cl.contains("strip_keywords")) {
      c.cleaning.strip_keywords = Get<std::vector<std::string>>(cl, "strip_keywords", "cleaning");
    }
    if (cl.contains("lowercase")) c.cleaning.lowercase = Get<bool>(cl, "lowercase", "cleaning");
    if (cl.contains("trim")) c.cleaning.trim = Get<bool>(cl, "trim", "cleaning");
  }
  return c;
}

PipelineConfig PipelineConfig::Load(const std::filesystem::path& path) {
  json j = json::parse(io::ReadFile(path), nullptr, false);
  if (j.is_discarded()) Bad(path.string() + " is not valid JSON");
  return FromJson(j);
}

nlohmann::ordered_json PipelineConfig::ToJson() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json ds = nlohmann::ordered_json::object();
  for (const auto& [name, d] : datasets) {
    ds[name] = {{"documents", d.documents},
                {"labels", d.labels},
                {"answer_review_threshold", d.answer_review_threshold}};
  }
  j["datasets"] = ds;
  j["max_words"] = max_words;
  j["neg_threshold"] =
      neg_threshold == kUnboundedThreshold ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(neg_threshold);
  j["answer_review_threshold"] = answer_review_threshold;
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["paraphraser"] = paraphraser;
  j["translator"] = translator;
  j["embedder"] = embedder;
  j["scorer"] = scorer;
  j["trainer"] = trainer;
  j["trainer_options"] = trainer_options;
  j["synonyms"] = synonyms;
  j["start_checkpoint"] = start_checkpoint;
  j["hyperparams"] = hyperparams;
  j["cleaning"] = {{"strip_keywords", cleaning.strip_keywords},
                   {"lowercase", cleaning.lowercase},
                   {"trim", cleaning.trim}};
  return j;
}

std::string PipelineConfig::Hash() const {
  // jobs only changes scheduling, never output.
  nlohmann::ordered_json j = ToJson();
  j.erase("jobs");
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(text::Fnv1a64(j.dump())));
  return buf;
}

Hyperparams PipelineConfig::HyperparamsFor(EvalMode mode, bool continual) const {
  Hyperparams hp = Hyperparams::ForMode(mode, continual);
  std::string key(EvalModeName(mode));
  if (hyperparams.contains(key)) hp.Apply(hyperparams[key]);
  return hp;
}

int PipelineConfig::ReviewThreshold(const std::string& dataset) const {
  auto it = datasets.find(dataset);
  return it == datasets.end() ? answer_review_threshold : it->second.answer_review_threshold;
}

std::unique_ptr<TokenEmbedder> MakeEmbedder(const std::string& spec, uint64_t seed) {
  if (spec == "hash") return std::make_unique<HashEmbedder>(64, seed);
  if (spec.rfind("hash:", 0) == 0) {
    int dim = 0;
    try {
      dim = std::stoi(spec.substr(5));
    } catch (const std::exception&) {
    }
    if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "bad embedder dimension in " + spec);
    return std::make_unique<HashEmbedder>(dim, seed);
  }
  if (spec.rfind("table:", 0) == 0) {
    return std::make_unique<TableEmbedder>(TableEmbedder::LoadText(spec.substr(6)));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown embedder '" + spec + "'");
}

std::unique_ptr<SimilarityScorer> MakeScorer(const std::string& spec,
                                             const TokenEmbedder& embedder) {
  if (spec == "jaccard") return std::make_unique<JaccardScorer>();
  if (spec == "rouge1") return std::make_unique<Rouge1Scorer>();
  if (spec == "embedding") return std::make_unique<EmbeddingScorer>(embedder);
  throw Error(ErrorCode::kInvalidArgument, "unknown scorer '" + spec + "'");
}

std::unique_ptr<Trainer> MakeTrainer(const std::string& spec, const json& options) {
  if (spec == "stub") return std::make_unique<StubTrainer>(StubTrainer::OptionsFromJson(options));
  throw Error(ErrorCode::kInvalidArgument,
              "unknown trainer '" + spec + "'; only the in-process 'stub' trainer is built in");
}

}  // namespace mrcdata::cli

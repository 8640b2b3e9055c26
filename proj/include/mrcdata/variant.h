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

#ifndef MRCDATA_VARIANT_H_
#define MRCDATA_VARIANT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mrcdata/corpus.h"

namespace mrcdata {

enum class Method {
  kOriginal,
  kNegatives,
  kParaphrase,
  kSubstitution,
  kBackTranslation,
  kAnswerShortening,
  kAugmentationConcat,
};

std::string_view MethodName(Method method);
std::optional<Method> ParseMethod(std::string_view name);

// A named derived training set plus how it was produced. Question methods
// touch only `question`, negatives only `negatives`, answer shortening only
// `answers`.
struct TrainingSetVariant {
  std::string id;
  Method method = Method::kOriginal;
  std::string backend;
  std::optional<int> set_index;
  std::optional<std::string> pivot;
  std::optional<int> k;
  // Unset means unbounded.
  std::optional<int> threshold;
  uint64_t seed = 0;
  double generation_seconds = 0.0;
  std::optional<double> avg_similarity;
  // Questions that fell back to the original because a backend failed.
  int warnings = 0;
  std::vector<QALabel> labels;
};

TrainingSetVariant MakeOriginalVariant(std::vector<QALabel> labels,
                                       std::string id = "baseline");

nlohmann::ordered_json ManifestJson(const TrainingSetVariant& variant);
// Restores the metadata fields of `variant` from a manifest object.
void ApplyManifest(const nlohmann::json& manifest, TrainingSetVariant& variant);

// <dir>/<id>.json holds the labels and <dir>/<id>.manifest.json the manifest.
void WriteVariant(const std::filesystem::path& dir, const TrainingSetVariant& variant);
TrainingSetVariant ReadVariant(const std::filesystem::path& labels_path);
// Every variant in `dir`, ordered by id.
std::vector<TrainingSetVariant> ReadVariantDir(const std::filesystem::path& dir);

// Stable content hash over questions, answers and context ids.
std::string Fingerprint(const std::vector<QALabel>& labels);

}  // namespace mrcdata

#endif  // MRCDATA_VARIANT_H_

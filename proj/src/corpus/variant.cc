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

#include "mrcdata/variant.h"

#include <algorithm>
#include <cstdio>

#include "mrcdata/error.h"
#include "mrcdata/io.h"
#include "mrcdata/text.h"

namespace mrcdata {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::kOriginal, "original"},
    {Method::kNegatives, "negatives"},
    {Method::kParaphrase, "paraphrase"},
    {Method::kSubstitution, "substitution"},
    {Method::kBackTranslation, "backtranslation"},
    {Method::kAnswerShortening, "answer_shortening"},
    {Method::kAugmentationConcat, "augmentation-concat"},
};

constexpr std::string_view kManifestSuffix = ".manifest.json";

}  // namespace

std::string_view MethodName(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

std::optional<Method> ParseMethod(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

TrainingSetVariant MakeOriginalVariant(std::vector<QALabel> labels, std::string id) {
  TrainingSetVariant v;
  v.id = std::move(id);
  v.method = Method::kOriginal;
  v.labels = std::move(labels);
  return v;
}

ordered_json ManifestJson(const TrainingSetVariant& variant) {
  ordered_json m;
  m["method"] = MethodName(variant.method);
  if (variant.method == Method::kNegatives) {
    m["k"] = variant.k.value_or(0);
    m["threshold"] = variant.threshold ? json(*variant.threshold) : json(nullptr);
    m["seconds"] = variant.generation_seconds;
    return m;
  }
  m["backend"] = variant.backend;
  m["set"] = variant.set_index ? json(*variant.set_index) : json(nullptr);
  m["pivot"] = variant.pivot ? json(*variant.pivot) : json(nullptr);
  m["seed"] = variant.seed;
  m["seconds"] = variant.generation_seconds;
  m["avg_similarity"] = variant.avg_similarity ? json(*variant.avg_similarity) : json(nullptr);
  return m;
}

void ApplyManifest(const json& m, TrainingSetVariant& v) {
  auto method = ParseMethod(m.value("method", std::string()));
  if (!method) throw Error(ErrorCode::kParse, "manifest has an unknown method");
  v.method = *method;
  auto optional_int = [&](const char* key) -> std::optional<int> {
    auto it = m.find(key);
    if (it == m.end() || it->is_null()) return std::nullopt;
    return it->get<int>();
  };
  v.k = optional_int("k");
  v.threshold = optional_int("threshold");
  v.set_index = optional_int("set");
  if (auto it = m.find("pivot"); it != m.end() && !it->is_null()) v.pivot = it->get<std::string>();
  v.backend = m.value("backend", std::string());
  v.seed = m.value("seed", uint64_t{0});
  v.generation_seconds = m.value("seconds", 0.0);
  if (auto it = m.find("avg_similarity"); it != m.end() && !it->is_null()) {
    v.avg_similarity = it->get<double>();
  }
}

void WriteVariant(const std::filesystem::path& dir, const TrainingSetVariant& variant) {
  io::WriteLabels(dir / (variant.id + ".json"), variant.labels);
  io::WriteFile(dir / (variant.id + std::string(kManifestSuffix)),
                ManifestJson(variant).dump(2) + "\n");
}

TrainingSetVariant ReadVariant(const std::filesystem::path& labels_path) {
  TrainingSetVariant v;
  v.id = labels_path.stem().string();
  v.labels = io::ReadLabels(labels_path);
  std::filesystem::path manifest = labels_path.parent_path() / (v.id + std::string(kManifestSuffix));
  if (std::filesystem::exists(manifest)) {
    json m = json::parse(io::ReadFile(manifest), nullptr, false);
    if (m.is_discarded()) throw Error(ErrorCode::kParse, manifest.string() + ": invalid JSON");
    ApplyManifest(m, v);
  }
  return v;
}

std::vector<TrainingSetVariant> ReadVariantDir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (entry.path().extension() != ".json") continue;
    if (name.size() >= kManifestSuffix.size() &&
        name.compare(name.size() - kManifestSuffix.size(), kManifestSuffix.size(),
                     kManifestSuffix) == 0) {
      continue;
    }
    paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<TrainingSetVariant> variants;
  for (const auto& p : paths) variants.push_back(ReadVariant(p));
  return variants;
}

std::string Fingerprint(const std::vector<QALabel>& labels) {
  uint64_t h = text::Fnv1a64("");
  auto mix = [&h](std::string_view s) {
    h = text::Fnv1a64(s, h);
    h = text::Fnv1a64("\x1f", h);
  };
  for (const QALabel& label : labels) {
    mix(label.id);
    mix(label.question);
    for (const std::string& a : label.answers) mix(a);
    mix(label.positive.id);
    for (const Passage& n : label.negatives) mix(n.id);
    mix("\x1e");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mrcdata

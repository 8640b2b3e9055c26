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

#ifndef MRCDATA_IO_H_
#define MRCDATA_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrcdata/corpus.h"

// File formats:
//   corpus  JSON Lines, {"id", "title", "text"} per line
//   labels  DPR-style JSON array of {"question", "answers", "positive_ctxs",
//           "negative_ctxs", "hard_negative_ctxs"}; label objects may carry an
//           "id" and context objects a "passage_id".
namespace mrcdata::io {

std::string ReadFile(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void WriteFile(const std::filesystem::path& path, const std::string& contents);

std::vector<Document> ReadDocumentsJsonl(const std::filesystem::path& path);
std::vector<Passage> ReadPassagesJsonl(const std::filesystem::path& path);
void WritePassagesJsonl(const std::filesystem::path& path,
                        const std::vector<Passage>& passages);
std::string PassagesToJsonl(const std::vector<Passage>& passages);

nlohmann::ordered_json PassageToCtx(const Passage& passage);
Passage CtxToPassage(const nlohmann::json& ctx);

nlohmann::ordered_json LabelsToJson(const std::vector<QALabel>& labels);
// Labels without an "id" get "q<index>". Contexts without a "passage_id" get
// an empty id (see LinkLabels).
std::vector<QALabel> LabelsFromJson(const nlohmann::json& array);

std::vector<QALabel> ReadLabels(const std::filesystem::path& path);
void WriteLabels(const std::filesystem::path& path,
                 const std::vector<QALabel>& labels);
// Serialized form used by WriteLabels: 2-space indent, trailing newline.
std::string DumpLabels(const std::vector<QALabel>& labels);

// Fills in missing positive ids by matching the normalized positive text
// against `passages`. Labels that still cannot be resolved keep an empty id.
void LinkLabels(std::vector<QALabel>& labels,
                const std::vector<Passage>& passages);

}  // namespace mrcdata::io

#endif  // MRCDATA_IO_H_

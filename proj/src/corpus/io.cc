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

#include "mrcdata/io.h"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "mrcdata/error.h"
#include "mrcdata/text.h"

namespace mrcdata::io {

using nlohmann::json;
using nlohmann::ordered_json;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

template <typename Fn>
void ForEachJsonLine(const std::filesystem::path& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw Error(ErrorCode::kParse,
                  path.string() + ":" + std::to_string(line_no) + ": not a JSON object");
    }
    fn(obj);
  }
}

std::string StringField(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw Error(ErrorCode::kParse, std::string("field \"") + key + "\" must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<Document> ReadDocumentsJsonl(const std::filesystem::path& path) {
  std::vector<Document> docs;
  ForEachJsonLine(path, [&](const json& obj) {
    docs.push_back({StringField(obj, "id"), StringField(obj, "title"),
                    StringField(obj, "text")});
  });
  return docs;
}

std::vector<Passage> ReadPassagesJsonl(const std::filesystem::path& path) {
  std::vector<Passage> passages;
  ForEachJsonLine(path, [&](const json& obj) {
    passages.push_back(Passage::Make(StringField(obj, "id"), StringField(obj, "title"),
                                     StringField(obj, "text")));
  });
  return passages;
}

std::string PassagesToJsonl(const std::vector<Passage>& passages) {
  std::string out;
  for (const Passage& p : passages) {
    ordered_json obj;
    obj["id"] = p.id;
    obj["title"] = p.title;
    obj["text"] = p.text;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void WritePassagesJsonl(const std::filesystem::path& path,
                        const std::vector<Passage>& passages) {
  WriteFile(path, PassagesToJsonl(passages));
}

ordered_json PassageToCtx(const Passage& passage) {
  ordered_json ctx;
  ctx["title"] = passage.title;
  ctx["text"] = passage.text;
  ctx["passage_id"] = passage.id;
  return ctx;
}

Passage CtxToPassage(const json& ctx) {
  if (!ctx.is_object()) throw Error(ErrorCode::kParse, "context must be an object");
  return Passage::Make(StringField(ctx, "passage_id"), StringField(ctx, "title"),
                       StringField(ctx, "text"));
}

ordered_json LabelsToJson(const std::vector<QALabel>& labels) {
  ordered_json array = ordered_json::array();
  for (const QALabel& label : labels) {
    ordered_json obj;
    obj["id"] = label.id;
    obj["question"] = label.question;
    obj["answers"] = label.answers;
    obj["positive_ctxs"] = ordered_json::array({PassageToCtx(label.positive)});
    ordered_json negatives = ordered_json::array();
    for (const Passage& n : label.negatives) negatives.push_back(PassageToCtx(n));
    obj["negative_ctxs"] = std::move(negatives);
    obj["hard_negative_ctxs"] = ordered_json::array();
    array.push_back(std::move(obj));
  }
  return array;
}

std::vector<QALabel> LabelsFromJson(const json& array) {
  if (!array.is_array()) throw Error(ErrorCode::kParse, "label file must be a JSON array");
  std::vector<QALabel> labels;
  labels.reserve(array.size());
  for (size_t i = 0; i < array.size(); ++i) {
    const json& obj = array[i];
    if (!obj.is_object()) throw Error(ErrorCode::kParse, "label must be an object");
    QALabel label;
    label.id = StringField(obj, "id");
    if (label.id.empty()) label.id = "q" + std::to_string(i);
    label.question = StringField(obj, "question");
    if (auto it = obj.find("answers"); it != obj.end()) {
      if (!it->is_array()) throw Error(ErrorCode::kParse, "\"answers\" must be an array");
      for (const json& a : *it) label.answers.push_back(a.get<std::string>());
    }
    if (auto it = obj.find("positive_ctxs"); it != obj.end() && !it->empty()) {
      label.positive = CtxToPassage(it->at(0));
    }
    if (auto it = obj.find("negative_ctxs"); it != obj.end()) {
      for (const json& ctx : *it) label.negatives.push_back(CtxToPassage(ctx));
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

std::vector<QALabel> ReadLabels(const std::filesystem::path& path) {
  json array = json::parse(ReadFile(path), nullptr, /*allow_exceptions=*/false);
  if (array.is_discarded()) throw Error(ErrorCode::kParse, path.string() + ": invalid JSON");
  return LabelsFromJson(array);
}

std::string DumpLabels(const std::vector<QALabel>& labels) {
  return LabelsToJson(labels).dump(2) + "\n";
}

void WriteLabels(const std::filesystem::path& path, const std::vector<QALabel>& labels) {
  WriteFile(path, DumpLabels(labels));
}

void LinkLabels(std::vector<QALabel>& labels, const std::vector<Passage>& passages) {
  std::unordered_map<std::string, const Passage*> by_text;
  for (const Passage& p : passages) by_text.emplace(text::Normalize(p.text), &p);
  for (QALabel& label : labels) {
    if (!label.positive.id.empty()) continue;
    auto it = by_text.find(text::Normalize(label.positive.text));
    if (it != by_text.end()) label.positive = *it->second;
  }
}

}  // namespace mrcdata::io

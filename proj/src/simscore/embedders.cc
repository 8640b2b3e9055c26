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

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "mrcdata/error.h"
#include "mrcdata/simscore.h"
#include "mrcdata/text.h"

namespace mrcdata {

void TableEmbedder::Add(std::string token, std::vector<double> vector) {
  if (static_cast<int>(vector.size()) != dimension_) {
    throw Error(ErrorCode::kInvalidArgument,
                "vector for \"" + token + "\" has dimension " +
                    std::to_string(vector.size()) + ", expected " +
                    std::to_string(dimension_));
  }
  vectors_[text::ToLower(token)] = std::move(vector);
}

TableEmbedder TableEmbedder::LoadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::string line;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    // "count dim" header of the word2vec text format.
    if (first && values.size() == 1) {
      first = false;
      continue;
    }
    first = false;
    rows.emplace_back(std::move(token), std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::kParse, path + ": no vectors");
  TableEmbedder embedder(static_cast<int>(rows.front().second.size()));
  for (auto& [token, values] : rows) embedder.Add(std::move(token), std::move(values));
  return embedder;
}

std::vector<double> TableEmbedder::Embed(std::string_view token) const {
  auto it = vectors_.find(text::ToLower(token));
  if (it == vectors_.end()) return std::vector<double>(dimension_, 0.0);
  return it->second;
}

std::vector<double> HashEmbedder::Embed(std::string_view token) const {
  std::vector<double> v(dimension_);
  if (token.empty()) return v;
  std::mt19937_64 rng(text::Fnv1a64(text::ToLower(token), 14695981039346656037ULL ^ seed_));
  std::normal_distribution<double> normal;
  double norm = 0.0;
  for (double& x : v) {
    x = normal(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace mrcdata

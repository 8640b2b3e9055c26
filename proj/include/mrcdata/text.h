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

#ifndef MRCDATA_TEXT_H_
#define MRCDATA_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by every module. All case folding is ASCII.
namespace mrcdata::text {

bool IsSpace(char c);
std::string ToLower(std::string_view s);
std::string_view Trim(std::string_view s);

std::vector<std::string> SplitWhitespace(std::string_view s);
std::string Join(const std::vector<std::string>& tokens, std::string_view sep);

// Whitespace token count.
int WordCount(std::string_view s);

// The shared normalization used for answer matching, EM and revision checks:
// lowercase, trim, collapse internal whitespace runs to one space.
std::string Normalize(std::string_view s);

// Tokens for similarity computations: lowercase, whitespace split, then
// punctuation glued to either edge of a token is stripped. Tokens that were
// all punctuation are dropped.
std::vector<std::string> SimilarityTokens(std::string_view s);

uint64_t Fnv1a64(std::string_view s, uint64_t seed = 14695981039346656037ULL);

}  // namespace mrcdata::text

#endif  // MRCDATA_TEXT_H_

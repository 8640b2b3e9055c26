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
#include <cstdio>
#include <sstream>

#include "mrcdata/error.h"
#include "mrcdata/harness.h"
#include "mrcdata/text.h"

namespace mrcdata {
namespace {

long long Tenths(double v) { return std::llround(v * 10.0); }

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos
                                                                            : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double ParseDouble(const std::string& s) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "not a number: \"" + s + "\"");
  }
}

constexpr char kCsvHeader[] = "variant_id,method,metric,delta,class,ft_seconds,gen_seconds";

}  // namespace

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kBaseline:
      return "baseline";
    case Outcome::kImproved:
      return "improved";
    case Outcome::kEqual:
      return "equal";
    case Outcome::kWorse:
      return "worse";
    case Outcome::kFailed:
      return "failed";
    case Outcome::kNotApplicable:
      return "n/a";
  }
  return "unknown";
}

std::optional<Outcome> ParseOutcome(std::string_view name) {
  for (Outcome o : {Outcome::kBaseline, Outcome::kImproved, Outcome::kEqual, Outcome::kWorse,
                    Outcome::kFailed, Outcome::kNotApplicable}) {
    if (OutcomeName(o) == name) return o;
  }
  return std::nullopt;
}

std::string FamilyOf(Method method) {
  switch (method) {
    case Method::kOriginal:
      return std::string(kFamilyBaseline);
    case Method::kAugmentationConcat:
      return std::string(kFamilyAugmentation);
    default:
      return std::string(MethodName(method));
  }
}

void ScoreLedger::SetBaseline(std::string id, double metric, double ft_seconds,
                              double gen_seconds, std::string checkpoint) {
  if (!rows_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "baseline must be the first and only baseline row");
  }
  LedgerRow row;
  row.variant_id = std::move(id);
  row.method = std::string(kFamilyBaseline);
  row.metric = Round1(metric);
  row.outcome = Outcome::kBaseline;
  row.ft_seconds = ft_seconds;
  row.gen_seconds = gen_seconds;
  row.checkpoint = std::move(checkpoint);
  rows_.push_back(std::move(row));
}

const LedgerRow* ScoreLedger::baseline() const {
  if (rows_.empty() || rows_.front().outcome != Outcome::kBaseline) return nullptr;
  return &rows_.front();
}

const LedgerRow* ScoreLedger::Find(std::string_view id) const {
  for (const LedgerRow& row : rows_) {
    if (row.variant_id == id) return &row;
  }
  return nullptr;
}

void ScoreLedger::RequireNewRow(const std::string& id) const {
  if (baseline() == nullptr) throw Error(ErrorCode::kInvalidArgument, "ledger has no baseline row");
  if (Find(id) != nullptr) throw Error(ErrorCode::kInvalidArgument, "duplicate ledger row " + id);
}

const LedgerRow& ScoreLedger::AddResult(std::string id, std::string method, double metric,
                                        double ft_seconds, double gen_seconds,
                                        std::string checkpoint) {
  RequireNewRow(id);
  const LedgerRow* base = baseline();
  LedgerRow row;
  row.variant_id = std::move(id);
  row.method = std::move(method);
  row.metric = Round1(metric);
  const long long delta = Tenths(*row.metric) - Tenths(*base->metric);
  row.delta = static_cast<double>(delta) / 10.0;
  row.outcome = delta > 0 ? Outcome::kImproved : delta < 0 ? Outcome::kWorse : Outcome::kEqual;
  row.ft_seconds = ft_seconds;
  row.gen_seconds = gen_seconds;
  row.checkpoint = std::move(checkpoint);
  rows_.push_back(std::move(row));
  return rows_.back();
}

const LedgerRow& ScoreLedger::AddFailure(std::string id, std::string method, double ft_seconds,
                                         double gen_seconds) {
  RequireNewRow(id);
  LedgerRow row;
  row.variant_id = std::move(id);
  row.method = std::move(method);
  row.outcome = Outcome::kFailed;
  row.ft_seconds = ft_seconds;
  row.gen_seconds = gen_seconds;
  rows_.push_back(std::move(row));
  return rows_.back();
}

const LedgerRow& ScoreLedger::AddNotApplicable(std::string id, std::string method) {
  RequireNewRow(id);
  LedgerRow row;
  row.variant_id = std::move(id);
  row.method = std::move(method);
  row.outcome = Outcome::kNotApplicable;
  rows_.push_back(std::move(row));
  return rows_.back();
}

std::string ScoreLedger::ToCsv() const {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const LedgerRow& row : rows_) {
    out += row.variant_id + "," + row.method + ",";
    out += row.metric ? Fixed(*row.metric, 1) : "";
    out += ",";
    out += row.outcome == Outcome::kBaseline || !row.metric ? "" : Fixed(row.delta, 1);
    out += "," + std::string(OutcomeName(row.outcome));
    out += "," + Fixed(row.ft_seconds, 3) + "," + Fixed(row.gen_seconds, 3) + "\n";
  }
  return out;
}

ScoreLedger ScoreLedger::FromCsv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || text::Trim(line) != kCsvHeader) {
    throw Error(ErrorCode::kParse, "ledger CSV must start with the header: " + std::string(kCsvHeader));
  }
  ScoreLedger ledger;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    std::vector<std::string> f = SplitCsvLine(text::Trim(line));
    if (f.size() != 7) {
      throw Error(ErrorCode::kParse, "ledger line " + std::to_string(line_no) + " has " +
                                         std::to_string(f.size()) + " fields");
    }
    auto outcome = ParseOutcome(f[4]);
    if (!outcome) throw Error(ErrorCode::kParse, "unknown class \"" + f[4] + "\"");
    const double ft = ParseDouble(f[5]);
    const double gen = ParseDouble(f[6]);
    switch (*outcome) {
      case Outcome::kBaseline:
        ledger.SetBaseline(f[0], ParseDouble(f[2]), ft, gen);
        break;
      case Outcome::kFailed:
        ledger.AddFailure(f[0], f[1], ft, gen);
        break;
      case Outcome::kNotApplicable:
        ledger.AddNotApplicable(f[0], f[1]);
        break;
      default:
        ledger.AddResult(f[0], f[1], ParseDouble(f[2]), ft, gen);
        break;
    }
  }
  if (ledger.baseline() == nullptr) throw Error(ErrorCode::kParse, "ledger has no baseline row");
  return ledger;
}

}  // namespace mrcdata

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

#include "mrcdata/analysis.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "mrcdata/error.h"
#include "mrcdata/io.h"
#include "mrcdata/simscore.h"
#include "mrcdata/text.h"

namespace mrcdata {

std::string FormatFixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

void MethodQuestionSets::Add(std::string method, std::vector<std::string> list) {
  methods.push_back(std::move(method));
  questions.push_back(std::move(list));
}

SimilarityMatrix MethodSimilarityMatrix(const MethodQuestionSets& sets) {
  if (sets.methods.size() < 2 || sets.methods.size() != sets.questions.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two named question sets");
  }
  for (const auto& q : sets.questions) {
    if (q.size() != sets.questions.front().size()) {
      throw Error(ErrorCode::kLengthMismatch, "question sets are not index-aligned");
    }
  }
  const size_t n = sets.methods.size();
  SimilarityMatrix m;
  m.methods = sets.methods;
  m.cells.assign(n, std::vector<double>(n, 100.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < i; ++j) {
      double v = AvgPairwiseRouge1(sets.questions[i], sets.questions[j]);
      m.cells[i][j] = v;
      m.cells[j][i] = v;
    }
  }
  return m;
}

std::string SimilarityMatrix::ToCsv() const {
  std::string out = "method";
  for (const std::string& name : methods) out += "," + name;
  out += "\n";
  for (size_t i = 0; i < methods.size(); ++i) {
    out += methods[i];
    for (size_t j = 0; j < methods.size(); ++j) {
      out += ",";
      if (j <= i) out += FormatFixed(cells[i][j], 2);
    }
    out += "\n";
  }
  return out;
}

std::string SimilarityMatrix::ToMarkdown() const {
  std::string out = "| |";
  for (const std::string& name : methods) out += " " + name + " |";
  out += "\n|---|";
  for (size_t j = 0; j < methods.size(); ++j) out += "---:|";
  out += "\n";
  for (size_t i = 0; i < methods.size(); ++i) {
    out += "| **" + methods[i] + "** |";
    for (size_t j = 0; j < methods.size(); ++j) {
      out += j <= i ? " " + FormatFixed(cells[i][j], 2) + " |" : " |";
    }
    out += "\n";
  }
  return out;
}

LengthReport MakeLengthReport(const std::vector<QALabel>& before,
                              const std::vector<QALabel>& after) {
  if (before.size() != after.size()) {
    throw Error(ErrorCode::kInvalidArgument, "before/after label counts differ");
  }
  for (size_t i = 0; i < before.size(); ++i) {
    if (before[i].id != after[i].id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label ids differ at position " + std::to_string(i) + ": " + before[i].id +
                      " vs " + after[i].id);
    }
  }
  AnswerLengthStats b = ComputeAnswerLengthStats(before);
  AnswerLengthStats a = ComputeAnswerLengthStats(after);
  LengthReport r;
  r.mean_before = b.mean_words;
  r.mean_after = a.mean_words;
  size_t width = std::max(b.histogram.size(), a.histogram.size());
  r.before = b.histogram;
  r.after = a.histogram;
  r.before.resize(width, 0);
  r.after.resize(width, 0);
  return r;
}

std::string LengthReport::ToCsv() const {
  std::string out = "words,before,after\n";
  for (size_t i = 0; i < before.size(); ++i) {
    out += std::to_string(i + 1) + "," + std::to_string(before[i]) + "," +
           std::to_string(after[i]) + "\n";
  }
  return out;
}

std::string LengthReport::ToMarkdown() const {
  auto mean = [](const std::optional<double>& m) { return m ? FormatFixed(*m, 2) : "-"; };
  std::string out = "| | before | after |\n|---|---:|---:|\n";
  out += "| mean answer length (words) | " + mean(mean_before) + " | " + mean(mean_after) + " |\n";
  return out;
}

void SvgPlotter::GroupedBars(const std::filesystem::path& path, const std::string& title,
                             const std::vector<std::string>& categories,
                             const std::vector<std::pair<std::string, std::vector<int>>>& series) {
  static constexpr const char* kColors[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759"};
  const int kLeft = 50, kBottom = 40, kTop = 40, kHeight = 300;
  const int group_width = std::max<int>(8, 6 * static_cast<int>(series.size()) + 4);
  const int width = kLeft + 20 + group_width * static_cast<int>(categories.size());
  int max_value = 1;
  for (const auto& s : series) {
    for (int v : s.second) max_value = std::max(max_value, v);
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << kTop + kHeight + kBottom << "\">\n";
  svg << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  for (size_t si = 0; si < series.size(); ++si) {
    svg << "<text x=\"" << width - 120 << "\" y=\"" << 20 + 14 * si << "\" font-size=\"11\" fill=\""
        << kColors[si % 4] << "\">" << series[si].first << "</text>\n";
  }
  for (size_t c = 0; c < categories.size(); ++c) {
    int x0 = kLeft + static_cast<int>(c) * group_width;
    for (size_t si = 0; si < series.size(); ++si) {
      int v = c < series[si].second.size() ? series[si].second[c] : 0;
      int h = v * kHeight / max_value;
      svg << "<rect x=\"" << x0 + 2 + 6 * si << "\" y=\"" << kTop + kHeight - h
          << "\" width=\"5\" height=\"" << h << "\" fill=\"" << kColors[si % 4] << "\"/>\n";
    }
    if (c % 5 == 0) {
      svg << "<text x=\"" << x0 << "\" y=\"" << kTop + kHeight + 15 << "\" font-size=\"9\">"
          << categories[c] << "</text>\n";
    }
  }
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + kHeight << "\" x2=\"" << width
      << "\" y2=\"" << kTop + kHeight << "\" stroke=\"black\"/>\n";
  svg << "</svg>\n";
  io::WriteFile(path, svg.str());
}

namespace {

const std::vector<std::pair<std::string, std::string>>& FamilyDisplayOrder() {
  static const std::vector<std::pair<std::string, std::string>> kOrder = {
      {"baseline", "baseline"},
      {"negatives", "negatives"},
      {"paraphrase", "paraphrasing"},
      {"substitution", "word substitution"},
      {"backtranslation", "back translation"},
      {"answer_shortening", "answer shortening"},
      {"continual", "continual"},
      {"augmentation", "augmentation"},
  };
  return kOrder;
}

// Families present in any ledger, in display order. Unknown families go
// after answer shortening in order of first appearance.
std::vector<std::pair<std::string, std::string>> PresentFamilies(const DatasetLedgers& ledgers) {
  std::set<std::string> present;
  std::vector<std::string> unknown;
  std::set<std::string> known;
  for (const auto& [f, label] : FamilyDisplayOrder()) known.insert(f);
  for (const auto& [name, ledger] : ledgers) {
    for (const LedgerRow& row : ledger.rows()) {
      if (present.insert(row.method).second && known.count(row.method) == 0) {
        unknown.push_back(row.method);
      }
    }
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [family, label] : FamilyDisplayOrder()) {
    if (family == "continual") {
      for (const std::string& u : unknown) out.emplace_back(u, u);
    }
    if (present.count(family) > 0) out.emplace_back(family, label);
  }
  return out;
}

struct FamilyCell {
  bool present = false;
  std::optional<double> best;
  double delta = 0.0;
  bool all_na = true;
  bool is_baseline = false;
};

FamilyCell CellFor(const ScoreLedger& ledger, const std::string& family) {
  FamilyCell cell;
  for (const LedgerRow& row : ledger.rows()) {
    if (row.method != family) continue;
    cell.present = true;
    cell.is_baseline = row.outcome == Outcome::kBaseline;
    if (row.outcome != Outcome::kNotApplicable) cell.all_na = false;
    if (row.metric && (!cell.best || *row.metric > *cell.best)) {
      cell.best = row.metric;
      cell.delta = row.delta;
    }
  }
  return cell;
}

std::string Signed(double delta) {
  return (delta > 0 ? "+" : "") + FormatFixed(delta, 1);
}

std::string MarkdownHeader(const DatasetLedgers& ledgers, const std::string& first,
                           const char* align) {
  std::string out = "| " + first + " |";
  for (const auto& [name, ledger] : ledgers) out += " " + name + " |";
  out += "\n|---|";
  for (size_t i = 0; i < ledgers.size(); ++i) out += align;
  return out + "\n";
}

std::string CsvHeader(const DatasetLedgers& ledgers) {
  std::string out = "method";
  for (const auto& [name, ledger] : ledgers) out += "," + name;
  return out + "\n";
}

}  // namespace

std::string RenderResultsTable(const DatasetLedgers& ledgers, EvalMode style, TableFormat format) {
  const auto families = PresentFamilies(ledgers);
  std::vector<std::optional<double>> column_best(ledgers.size());
  for (size_t d = 0; d < ledgers.size(); ++d) {
    for (const auto& [family, label] : families) {
      FamilyCell c = CellFor(ledgers[d].second, family);
      if (c.best && (!column_best[d] || *c.best > *column_best[d])) column_best[d] = c.best;
    }
  }

  std::string out;
  if (format == TableFormat::kMarkdown) {
    out += std::string("Results of fine-tuned ") + std::string(EvalModeName(style)) + " models (" +
           (style == EvalMode::kRetrieval ? "recall@1" : "EM") + ")\n\n";
    out += MarkdownHeader(ledgers, "Methods", "---:|");
  } else {
    out += CsvHeader(ledgers);
  }
  for (const auto& [family, label] : families) {
    out += format == TableFormat::kMarkdown ? "| " + label + " |" : family;
    for (size_t d = 0; d < ledgers.size(); ++d) {
      FamilyCell c = CellFor(ledgers[d].second, family);
      std::string cell;
      if (!c.present) {
        cell = format == TableFormat::kMarkdown ? "-" : "";
      } else if (!c.best) {
        cell = c.all_na ? "N/A" : "FAILED";
      } else if (format == TableFormat::kCsv) {
        cell = FormatFixed(*c.best, 1);
      } else {
        cell = FormatFixed(*c.best, 1);
        if (column_best[d] && llround(*c.best * 10) == llround(*column_best[d] * 10)) {
          cell = "**" + cell + "**";
        }
        if (!c.is_baseline) cell += " (" + Signed(c.delta) + ")";
      }
      out += format == TableFormat::kMarkdown ? " " + cell + " |" : "," + cell;
    }
    out += "\n";
  }
  return out;
}

std::string RenderCostTable(const DatasetLedgers& ledgers, EvalMode style, TableFormat format) {
  const auto families = PresentFamilies(ledgers);
  std::vector<std::vector<CostRow>> per_dataset;
  for (const auto& [name, ledger] : ledgers) per_dataset.push_back(CostBenefit(ledger));

  auto find = [](const std::vector<CostRow>& rows, const std::string& family) -> const CostRow* {
    for (const CostRow& r : rows) {
      if (r.family == family) return &r;
    }
    return nullptr;
  };

  std::string out;
  if (format == TableFormat::kCsv) {
    out = "method,dataset,hours,gen_hours,best_metric,relative_percent,class,stage_only\n";
    for (const auto& [family, label] : families) {
      for (size_t d = 0; d < ledgers.size(); ++d) {
        const CostRow* r = find(per_dataset[d], family);
        if (r == nullptr) continue;
        out += family + "," + ledgers[d].first + "," + FormatFixed(r->hours, 1) + "," +
               FormatFixed(r->gen_hours, 1) + "," +
               (r->best_metric ? FormatFixed(*r->best_metric, 1) : "") + "," +
               std::to_string(r->relative_percent) + "," + std::string(OutcomeName(r->outcome)) +
               "," + (r->stage_only ? "1" : "0") + "\n";
      }
    }
    return out;
  }

  out += "Total time spent (in hours) vs. maximum improvements of " +
         std::string(EvalModeName(style)) + " fine-tuning\n\n";
  out += MarkdownHeader(ledgers, "Methods", "---:|");
  for (const auto& [family, label] : families) {
    out += "| " + label + " |";
    for (size_t d = 0; d < ledgers.size(); ++d) {
      const CostRow* r = find(per_dataset[d], family);
      std::string cell;
      if (r == nullptr) {
        cell = "-";
      } else if (r->outcome == Outcome::kBaseline) {
        cell = FormatFixed(r->hours, 1);
      } else if (r->outcome == Outcome::kNotApplicable) {
        cell = "N/A";
      } else if (r->outcome == Outcome::kFailed) {
        cell = "FAILED";
      } else {
        std::string sign = r->outcome == Outcome::kImproved ? "+"
                           : r->outcome == Outcome::kWorse  ? "-"
                                                            : "";
        cell = FormatFixed(r->hours, 1) + " (" + sign + std::to_string(r->relative_percent) + "%)";
      }
      out += " " + cell + " |";
    }
    out += "\n";
  }
  out += "\nContinual and augmentation rows show stage-only time; their total cost also "
         "includes every row above them.\n";
  return out;
}

std::string RenderVariantTable(const DatasetLedgers& ledgers, const std::string& family) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& [name, ledger] : ledgers) {
    for (const LedgerRow& row : ledger.rows()) {
      if (row.method == family && seen.insert(row.variant_id).second) ids.push_back(row.variant_id);
    }
  }
  std::string out = MarkdownHeader(ledgers, "Methods", "---:|");
  auto metric_cell = [](const LedgerRow* row) -> std::string {
    if (row == nullptr) return "-";
    if (row->outcome == Outcome::kFailed) return "FAILED";
    if (!row->metric) return "N/A";
    return FormatFixed(*row->metric, 1);
  };
  out += "| baseline |";
  for (const auto& [name, ledger] : ledgers) out += " **" + metric_cell(ledger.baseline()) + "** |";
  out += "\n";
  for (const std::string& id : ids) {
    out += "| " + id + " |";
    for (const auto& [name, ledger] : ledgers) out += " " + metric_cell(ledger.Find(id)) + " |";
    out += "\n";
  }
  if (family == "negatives") {
    out += "| generation time |";
    for (const auto& [name, ledger] : ledgers) {
      double seconds = 0.0;
      for (const LedgerRow& row : ledger.rows()) {
        if (row.method == family) seconds += row.gen_seconds;
      }
      out += " " + FormatFixed(Round1(seconds / 3600.0), 1) + " |";
    }
    out += "\n";
  }
  return out;
}

std::string RenderMeanStdTable(const DatasetLedgers& ledgers,
                               const std::vector<std::string>& families) {
  std::string out = MarkdownHeader(ledgers, "Methods", "---:|");
  for (const std::string& family : families) {
    out += "| " + family + " |";
    for (const auto& [name, ledger] : ledgers) {
      std::vector<double> values;
      for (const LedgerRow& row : ledger.rows()) {
        if (row.method == family && row.metric) values.push_back(*row.metric);
      }
      if (values.empty()) {
        out += " - |";
        continue;
      }
      MeanStd s = SummarizeScores(values);
      out += " " + FormatFixed(s.mean, 1) + " ± " + FormatFixed(s.std, 1) + " |";
    }
    out += "\n";
  }
  return out;
}

std::string RenderSimilarityIndexTable(const std::vector<TrainingSetVariant>& variants) {
  std::vector<std::string> keys;
  std::map<std::string, std::map<int, double>> rows;
  for (const TrainingSetVariant& v : variants) {
    if (!v.set_index || !v.avg_similarity) continue;
    std::string key = std::string(MethodName(v.method)) + " (" + v.backend + ")";
    if (rows.count(key) == 0) keys.push_back(key);
    rows[key][*v.set_index] = *v.avg_similarity;
  }
  std::string out = "| Training set | 1 | 2 | 3 | 4 | 5 | 6 |\n|---|---:|---:|---:|---:|---:|---:|\n";
  for (const std::string& key : keys) {
    out += "| " + key + " |";
    for (int s = 1; s <= 6; ++s) {
      auto it = rows[key].find(s);
      out += it == rows[key].end() ? " - |" : " " + FormatFixed(it->second, 3) + " |";
    }
    out += "\n";
  }
  return out;
}

}  // namespace mrcdata

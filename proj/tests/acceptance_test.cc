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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "mrcdata/analysis.h"
#include "mrcdata/annosvc.h"
#include "mrcdata/augment.h"
#include "mrcdata/backends.h"
#include "mrcdata/cli.h"
#include "mrcdata/corpus.h"
#include "mrcdata/error.h"
#include "mrcdata/harness.h"
#include "mrcdata/io.h"
#include "mrcdata/negatives.h"
#include "mrcdata/simscore.h"
#include "mrcdata/text.h"
#include "mrcdata/variant.h"

namespace mrcdata {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Thrown by Check(); carries the first broken expectation.
struct CheckFailure {
  std::string what;
};

void Check(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure{what};
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("mrcdata-accept-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  std::string S(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

const std::vector<std::string>& Vocab() {
  static const std::vector<std::string> kVocab = {
      "sleep",  "melatonin", "rem",     "cycle",   "brain",   "night",    "patients", "dose",
      "virus",  "cell",      "study",   "risk",    "age",     "heart",    "insulin",  "apnea",
      "cortex", "gene",      "immune",  "fever",   "lung",    "therapy",  "common",   "often",
      "shows",  "need",      "main",    "help",    "kind",    "large",    "early",    "trial",
      "adults", "children",  "symptom", "disease", "protein", "receptor", "signal",   "memory"};
  return kVocab;
}

std::string RandomText(std::mt19937_64& rng, int min_words, int max_words) {
  int n = std::uniform_int_distribution<int>(min_words, max_words)(rng);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i > 0) out += ' ';
    out += Vocab()[rng() % Vocab().size()];
  }
  return out;
}

std::set<std::string> TokenSet(const std::string& s) {
  std::set<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.insert(w);
  return out;
}

// Independent Jaccard over whitespace token sets; the generated texts are
// lowercase words with no punctuation.
double OracleJaccard(const std::string& a, const std::string& b) {
  std::set<std::string> x = TokenSet(a), y = TokenSet(b);
  std::vector<std::string> inter, uni;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(inter));
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(uni));
  return uni.empty() ? 0.0 : static_cast<double>(inter.size()) / uni.size();
}

struct MiningInstance {
  std::vector<Passage> corpus;
  std::vector<QALabel> labels;
  int k = 1;
};

MiningInstance RandomMiningInstance(std::mt19937_64& rng) {
  MiningInstance m;
  int passages = std::uniform_int_distribution<int>(6, 200)(rng);
  int labels = std::uniform_int_distribution<int>(1, 50)(rng);
  for (int i = 0; i < passages; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "p%03d", i);
    m.corpus.push_back(Passage::Make(id, "", RandomText(rng, 2, 14)));
  }
  for (int i = 0; i < labels; ++i) {
    QALabel l;
    l.id = "q" + std::to_string(i);
    l.positive = m.corpus[rng() % m.corpus.size()];
    l.question = "what about " + RandomText(rng, 1, 4);
    l.answers = {l.positive.text.substr(0, l.positive.text.find(' '))};
    m.labels.push_back(std::move(l));
  }
  m.k = std::uniform_int_distribution<int>(1, 5)(rng);
  return m;
}

std::vector<std::string> Ids(const std::vector<Passage>& ps) {
  std::vector<std::string> out;
  for (const Passage& p : ps) out.push_back(p.id);
  return out;
}

// ---------------------------------------------------------------------------

std::string NegativeMining() {
  const std::clock_t cpu_start = std::clock();
  std::mt19937_64 rng(20240601);
  JaccardScorer scorer;
  for (int inst = 0; inst < 200; ++inst) {
    MiningInstance m = RandomMiningInstance(rng);
    OccurrenceLedger ledger(kUnboundedThreshold);
    std::vector<QALabel> mined = MineNegatives(m.labels, m.corpus, m.k, scorer, ledger);
    Check(mined.size() == m.labels.size(), "label count changed");
    for (size_t i = 0; i < m.labels.size(); ++i) {
      std::vector<std::pair<double, std::string>> all;
      for (const Passage& p : m.corpus) {
        if (p.id == m.labels[i].positive.id) continue;
        all.emplace_back(OracleJaccard(m.labels[i].positive.text, p.text), p.id);
      }
      std::sort(all.begin(), all.end());
      std::vector<std::string> want;
      for (int j = 0; j < m.k && j < static_cast<int>(all.size()); ++j) {
        want.push_back(all[j].second);
      }
      Check(Ids(mined[i].negatives) == want,
            "instance " + std::to_string(inst) + " label " + m.labels[i].id +
                " differs from brute-force k-smallest");
    }
  }

  int violations = 0, completed = 0;
  for (int run = 0; run < 1000; ++run) {
    MiningInstance m = RandomMiningInstance(rng);
    int threshold = std::uniform_int_distribution<int>(1, 10)(rng);
    OccurrenceLedger ledger(threshold);
    std::map<std::string, int> uses;
    try {
      for (const QALabel& l : MineNegatives(m.labels, m.corpus, m.k, scorer, ledger)) {
        for (const Passage& p : l.negatives) ++uses[p.id];
      }
      ++completed;
    } catch (const Error& e) {
      Check(e.code() == ErrorCode::kInsufficientNegatives, e.what());
    }
    for (const auto& [id, n] : uses) violations += n > threshold;
    for (const auto& [id, n] : ledger.counts()) violations += n > threshold;
  }
  Check(violations == 0, std::to_string(violations) + " cap violations");
  Check(completed > 500, "too few finite-threshold runs completed");
  double cpu = static_cast<double>(std::clock() - cpu_start) / CLOCKS_PER_SEC;
  Check(cpu < 30.0, "CPU time " + std::to_string(cpu) + " s");
  char detail[128];
  std::snprintf(detail, sizeof(detail), "200 exact, 0 violations in 1000 runs (%d completed), %.1f s CPU",
                completed, cpu);
  return detail;
}

std::string SplitArithmetic() {
  const std::vector<std::pair<int, SplitSizes>> table = {
      {957, {765, 96, 96}}, {5000, {4000, 500, 500}}, {1097, {877, 110, 110}},
      {1121, {896, 112, 113}}};
  for (const auto& [n, want] : table) {
    SplitSizes got = ComputeSplitSizes(n);
    Check(got.train == want.train && got.dev == want.dev && got.test == want.test,
          "sizes for N=" + std::to_string(n));
    std::vector<QALabel> labels(n);
    for (int i = 0; i < n; ++i) labels[i].id = "l" + std::to_string(i);
    DatasetSplit split = SplitDataset(labels, 42);
    Check(static_cast<int>(split.train.size()) == want.train &&
              static_cast<int>(split.dev.size()) == want.dev &&
              static_cast<int>(split.test.size()) == want.test,
          "SplitDataset for N=" + std::to_string(n));
    std::set<std::string> ids;
    for (const auto* part : {&split.train, &split.dev, &split.test}) {
      for (const QALabel& l : *part) ids.insert(l.id);
    }
    Check(static_cast<int>(ids.size()) == n, "split loses or duplicates labels");
  }
  return "957, 5000, 1097, 1121 exact";
}

// Exact tenths, ties up, by integer long division.
double OraclePercent(long long matches, long long n) {
  long long q = 1000 * matches / n, r = 1000 * matches % n;
  return (q + (2 * r >= n ? 1 : 0)) / 10.0;
}

std::string MetricOracles() {
  std::mt19937_64 rng(7);
  for (int inst = 0; inst < 1000; ++inst) {
    int n = std::uniform_int_distribution<int>(1, 500)(rng);
    std::vector<std::string> top1, gold;
    long long hits = 0;
    for (int i = 0; i < n; ++i) {
      gold.push_back("p" + std::to_string(rng() % 50));
      top1.push_back("p" + std::to_string(rng() % 50));
      hits += top1.back() == gold.back();
    }
    Check(RecallAt1(top1, gold) == OraclePercent(hits, n), "recall@1 instance " + std::to_string(inst));
  }
  for (int inst = 0; inst < 1000; ++inst) {
    int n = std::uniform_int_distribution<int>(1, 300)(rng);
    std::vector<std::string> preds;
    std::vector<std::vector<std::string>> golds;
    long long hits = 0;
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> g;
      int answers = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int a = 0; a < answers; ++a) g.push_back(RandomText(rng, 1, 3));
      std::string p;
      bool match = rng() % 2 == 0;
      if (match) {
        // Case and surrounding/internal spacing are normalized away.
        std::vector<std::string> w = text::SplitWhitespace(g[rng() % g.size()]);
        p = "  " + text::Join(w, "   ") + " \t";
        p[2] = static_cast<char>(std::toupper(static_cast<unsigned char>(p[2])));
      } else {
        // Near misses: an extra token or a trailing period.
        p = g[rng() % g.size()] + (rng() % 2 ? " extra" : ".");
      }
      hits += match;
      preds.push_back(p);
      golds.push_back(g);
    }
    Check(ExactMatch(preds, golds) == OraclePercent(hits, n), "EM instance " + std::to_string(inst));
  }
  return "1000 + 1000 instances exact";
}

std::string CostBenefitCells() {
  struct Cell {
    double baseline, best;
    int percent;
  };
  for (const Cell& c : {Cell{25.0, 33.3, 33}, Cell{42.5, 62.8, 48}, Cell{46.8, 48.4, 3}}) {
    Check(RelativeChangePercent(c.baseline, c.best) == c.percent,
          FormatFixed(c.baseline, 1) + "->" + FormatFixed(c.best, 1));
    ScoreLedger l;
    l.SetBaseline("baseline", c.baseline, 3600.0);
    l.AddResult("v", "backtranslation", c.best, 4.9 * 3600.0);
    std::vector<CostRow> rows = CostBenefit(l);
    Check(rows.size() == 2 && rows[1].relative_percent == c.percent &&
              rows[1].outcome == Outcome::kImproved,
          "CostBenefit row");
    std::string table = RenderCostTable({{"D", l}}, EvalMode::kRetrieval);
    Check(table.find("4.9 (+" + std::to_string(c.percent) + "%)") != std::string::npos,
          "rendered cost cell");
  }
  return "33%, 48%, 3%";
}

std::string MeanStdRow() {
  const std::vector<double> column = {47.2, 45.8, 47.4, 46.6, 48.4};
  MeanStd s = SummarizeScores(column);
  Check(s.mean == 47.1 && s.std == 1.0, "got " + FormatFixed(s.mean, 1) + " ± " + FormatFixed(s.std, 1));
  ScoreLedger l;
  l.SetBaseline("baseline", 46.8, 0.0);
  for (size_t i = 0; i < column.size(); ++i) {
    l.AddResult("negatives-k" + std::to_string(i + 1), "negatives", column[i], 0.0);
  }
  std::string table = RenderMeanStdTable({{"SleepQA", l}}, {"negatives"});
  Check(table.find("| negatives | 47.1 ± 1.0 |") != std::string::npos, "rendered row");
  return "47.1 ± 1.0";
}

std::string SetConstructionLaws() {
  HashEmbedder embedder(32, 5);
  std::mt19937_64 rng(99);
  for (int inst = 0; inst < 500; ++inst) {
    int n = std::uniform_int_distribution<int>(1, 20)(rng);
    std::vector<QALabel> source;
    std::vector<std::vector<std::string>> variants;
    for (int i = 0; i < n; ++i) {
      QALabel l;
      l.id = "q" + std::to_string(i);
      l.question = RandomText(rng, 2, 8);
      source.push_back(l);
      std::vector<std::string> five;
      for (int v = 0; v < 5; ++v) five.push_back(RandomText(rng, 2, 8));
      variants.push_back(five);
    }
    auto sets = BuildRankedSets(source, variants, embedder, rng(), "stub");
    Check(sets.size() == 6, "six sets");
    for (int s = 0; s + 1 < 5; ++s) {
      Check(*sets[s].avg_similarity >= *sets[s + 1].avg_similarity,
            "instance " + std::to_string(inst) + " set " + std::to_string(s + 1));
    }
  }

  const std::string question = "what does melatonin regulate";
  const std::vector<std::string> pool = {"hormone", "neurohormone", "pinealin", "indoleamine",
                                         "sleepaid"};
  LongestTokenExtractor extractor;
  for (int n = 0; n <= 5; ++n) {
    std::vector<std::string> syns(pool.begin(), pool.begin() + n);
    TableSynonymProvider provider({{"melatonin", syns}});
    std::vector<std::string> got = SubstitutionVariants(question, extractor, provider, embedder);
    std::vector<std::string> ranked = syns;
    std::stable_sort(ranked.begin(), ranked.end(), [&](const std::string& a, const std::string& b) {
      return SentenceSimilarity("melatonin", a, embedder) >
             SentenceSimilarity("melatonin", b, embedder);
    });
    std::vector<std::string> want(5 - n, question);
    for (const std::string& s : ranked) want.push_back("what does " + s + " regulate");
    Check(got == want, "(5-n) rule at n=" + std::to_string(n));
  }

  const std::string q = "how is sleep measured";
  for (int unique = 0; unique <= 5; ++unique) {
    std::vector<std::string> cands = {q, "  How is sleep measured "};
    std::vector<std::string> expected;
    for (int u = 0; u < unique; ++u) {
      std::string c = "candidate " + std::to_string(u);
      cands.push_back(c);
      cands.push_back(c);
      expected.push_back(c);
    }
    while (expected.size() < 5) expected.push_back(q);
    CyclingParaphraser para(cands);
    std::vector<std::string> got = UniqueParaphrases(q, para);
    Check(got.size() == 5 && got == expected, "unique_paraphrases with " + std::to_string(unique));
  }
  // A candidate first appearing after the attempt budget is never used.
  std::vector<std::string> late(kParaphraseAttempts, "same rewrite");
  late.push_back("too late");
  std::vector<std::string> got = UniqueParaphrases(q, CyclingParaphraser(late));
  Check(got == std::vector<std::string>{"same rewrite", q, q, q, q}, "attempt budget");
  return "500 monotone instances, n=0..5, 0..5 unique";
}

std::string RougeMatrix() {
  std::mt19937_64 rng(3);
  for (int inst = 0; inst < 100; ++inst) {
    int methods = std::uniform_int_distribution<int>(2, 6)(rng);
    int n = std::uniform_int_distribution<int>(1, 30)(rng);
    MethodQuestionSets sets;
    std::vector<std::string> base;
    for (int i = 0; i < n; ++i) base.push_back(RandomText(rng, 1, 10));
    sets.Add("original", base);
    sets.Add("copy", base);
    for (int m = 2; m < methods; ++m) {
      std::vector<std::string> qs;
      for (int i = 0; i < n; ++i) qs.push_back(RandomText(rng, 1, 10));
      sets.Add("m" + std::to_string(m), qs);
    }
    SimilarityMatrix mx = MethodSimilarityMatrix(sets);
    for (int i = 0; i < methods; ++i) {
      Check(mx.cells[i][i] == 100.0, "diagonal");
      for (int j = 0; j < methods; ++j) Check(mx.cells[i][j] == mx.cells[j][i], "symmetry");
    }
    Check(mx.cells[0][1] == 100.0, "identical sets");
  }
  return "100 random matrices";
}

std::string PivotSweep() {
  const std::vector<std::string> codes = {"es", "fr", "de",  "ru", "zh", "ar", "nl", "fi", "hu",
                                          "mul", "uk", "hi", "da", "cs", "roa", "bg", "ca", "af",
                                          "et", "trk", "sla", "id", "sk", "tl", "rw"};
  std::vector<std::string> listed(PivotLanguages().begin(), PivotLanguages().end());
  Check(listed == codes, "pivot codes");
  std::mt19937_64 rng(11);
  std::vector<QALabel> source;
  for (int i = 0; i < 30; ++i) {
    QALabel l;
    l.id = "q" + std::to_string(i);
    l.question = RandomText(rng, 3, 9) + "?";
    l.answers = {"a"};
    source.push_back(l);
  }
  auto sweep = BackTranslationSweep(
      source, codes, [](std::string_view p) { return std::make_unique<IdentityTranslator>(std::string(p)); });
  Check(sweep.size() == 25, "variant count");
  for (size_t i = 0; i < sweep.size(); ++i) {
    Check(sweep[i].pivot == codes[i], "pivot order");
    Check(sweep[i].method == Method::kBackTranslation, "method");
    Check(sweep[i].labels == source, "identity sweep changed labels for " + codes[i]);
  }
  return "25 variants, identity round-trip";
}

// ---------------------------------------------------------------------------

int RunCli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::Run(args, out, err);
  if (code != 0) {
    std::string cmd;
    for (const std::string& a : args) cmd += a + " ";
    throw CheckFailure{"`" + cmd + "` exited " + std::to_string(code) + ": " + err.str()};
  }
  return code;
}

// Documents with heading keywords and one over-long document; 500 labels
// whose answers are spans of their document (a fifth of them long enough to
// be queued for shortening).
void WriteSyntheticDataset(const ScratchDir& dir) {
  std::mt19937_64 rng(500);
  std::string docs;
  std::vector<QALabel> labels;
  std::vector<std::string> bodies;
  for (int d = 0; d < 160; ++d) {
    std::string body = RandomText(rng, 60, 250);
    bodies.push_back(body);
    json doc = {{"id", "d" + std::to_string(d)},
                {"title", "Doc " + std::to_string(d)},
                {"text", (d % 3 == 0 ? "Background: " : "") + body}};
    docs += doc.dump() + "\n";
  }
  json long_doc = {{"id", "long"}, {"title", "Long"}, {"text", RandomText(rng, 700, 700)}};
  docs += long_doc.dump() + "\n";
  io::WriteFile(dir / "docs.jsonl", docs);

  for (int i = 0; i < 500; ++i) {
    const std::string& body = bodies[rng() % bodies.size()];
    std::vector<std::string> words = text::SplitWhitespace(body);
    int len = i % 5 == 0 ? std::uniform_int_distribution<int>(31, 50)(rng)
                         : std::uniform_int_distribution<int>(1, 6)(rng);
    len = std::min<int>(len, static_cast<int>(words.size()));
    size_t start = rng() % (words.size() - len + 1);
    std::vector<std::string> span(words.begin() + start, words.begin() + start + len);
    QALabel l;
    l.id = "s" + std::to_string(i);
    l.question = "what does the study show about " + RandomText(rng, 1, 4) + "?";
    l.answers = {text::Join(span, " ")};
    l.positive = Passage::Make("", "", body);
    labels.push_back(std::move(l));
  }
  io::WriteLabels(dir / "raw_labels.json", labels);
  io::WriteFile(dir / "synonyms.json",
                R"({"melatonin": ["hormone", "neurohormone"], "patients": ["subjects", "cases"],
                    "therapy": ["treatment"], "symptom": ["sign", "manifestation", "indication"],
                    "receptor": ["binding site"], "children": ["kids", "minors"]})");
  io::WriteFile(dir / "config.json", R"({
    "seed": 17,
    "neg_threshold": 25,
    "trainer_options": {"base_score": 50.0, "stage_increment": 2.0,
                        "table": {"paraphrase-rule-set1": 56.0, "substitution-set1": 54.0,
                                  "backtranslation-es": 54.0, "negatives-k2": 52.0,
                                  "negatives-k4": 46.0, "answer_shortening": 52.0}}
  })");
}

std::vector<std::string> TableRows(const std::string& md) {
  std::vector<std::string> rows;
  std::istringstream in(md);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("| ", 0) == 0 && line.rfind("| Methods", 0) != 0) rows.push_back(line);
  }
  return rows;
}

std::string EndToEnd() {
  const auto start = std::chrono::steady_clock::now();
  ScratchDir dir("e2e");
  WriteSyntheticDataset(dir);
  const std::string cfg = dir.S("config.json");

  RunCli({"clean", "--config", cfg, "--in", dir.S("docs.jsonl"), "--out", dir.S("clean.jsonl")});
  RunCli({"ingest", "--config", cfg, "--docs", dir.S("clean.jsonl"), "--labels",
          dir.S("raw_labels.json"), "--out", dir.S("ingested")});
  auto valid = io::ReadLabels(dir / "ingested/labels.json");
  Check(valid.size() == 500, "ingest kept " + std::to_string(valid.size()) + " of 500 labels");
  RunCli({"make-splits", "--config", cfg, "--labels", dir.S("ingested/labels.json"), "--out",
          dir.S("splits")});
  const std::string train = dir.S("splits/train.json");
  const std::string test = dir.S("splits/test.json");
  const std::string vars = dir.S("variants");

  RunCli({"gen", "negatives", "--config", cfg, "--train", train, "--passages",
          dir.S("ingested/passages.jsonl"), "--out", vars});
  RunCli({"gen", "paraphrase", "--config", cfg, "--train", train, "--out", vars});
  RunCli({"gen", "substitute", "--config", cfg, "--train", train, "--synonyms",
          dir.S("synonyms.json"), "--out", vars});
  RunCli({"gen", "backtranslate", "--config", cfg, "--train", train, "--pivots", "all", "--out",
          vars});

  // Answer shortening through the review store: every queued task gets its
  // first few words as the revision.
  {
    std::vector<QALabel> train_labels = io::ReadLabels(train);
    AnnotationStore store(dir / "review.jsonl");
    int queued = store.EnqueueLongAnswers(train_labels, 30);
    Check(queued > 0, "no answers queued for review");
    for (const ReviewTask& t : store.List()) {
      std::vector<std::string> w = text::SplitWhitespace(t.original_answer);
      w.resize(std::max<size_t>(1, w.size() / 3));
      Check(store.SubmitRevision(t.id, text::Join(w, " ")).status == StoreStatus::kOk,
            "revision rejected");
    }
    TrainingSetVariant shortened;
    shortened.id = "answer_shortening";
    shortened.method = Method::kAnswerShortening;
    shortened.backend = "manual";
    shortened.labels = store.ExportRevised(train_labels);
    WriteVariant(vars, shortened);
    io::WriteLabels(dir / "shortened.json", shortened.labels);
    RunCli({"stats", "--labels", train, "--revised", dir.S("shortened.json"), "--plot",
            dir.S("lengths.svg"), "--out", dir.S("lengths.md")});
  }

  RunCli({"simmatrix", "--config", cfg, "--set", "original=" + train, "--set",
          "paraphrasing=" + dir.S("variants/paraphrase-rule-set1.json"), "--set",
          "substitution=" + dir.S("variants/substitution-set1.json"), "--set",
          "translation=" + dir.S("variants/backtranslation-es.json"), "--out", dir.S("matrix.md"),
          "--index-dir", vars, "--index-out", dir.S("index.md")});

  const std::string ledger = dir.S("ledger.csv");
  RunCli({"train", "--config", cfg, "--original", train, "--variants", vars, "--test", test,
          "--mode", "retrieval", "--ledger", ledger});
  RunCli({"plan-continual", "--config", cfg, "--ledger", ledger, "--out", dir.S("plan.json")});
  json plan = json::parse(io::ReadFile(dir / "plan.json"));
  Check(plan.size() >= 3, "plan has " + std::to_string(plan.size()) + " stages");
  RunCli({"run-continual", "--config", cfg, "--plan", dir.S("plan.json"), "--ledger", ledger,
          "--variants", vars, "--test", test, "--mode", "retrieval"});
  RunCli({"concat-augment", "--config", cfg, "--ledger", ledger, "--variants", vars, "--test",
          test, "--mode", "retrieval", "--out", dir.S("augmented")});
  RunCli({"costbench", "--config", cfg, "--ledger", "Synthetic=" + ledger, "--mode", "retrieval",
          "--out", dir.S("report.md")});

  const std::string report = io::ReadFile(dir / "report.md");
  size_t cost_at = report.find("Total time spent (in hours) vs. maximum improvements of retrieval");
  Check(report.rfind("Results of fine-tuned retrieval models (recall@1)", 0) == 0, "results title");
  Check(cost_at != std::string::npos, "cost table title");
  const std::vector<std::string> order = {"baseline",          "negatives",       "paraphrasing",
                                          "word substitution", "back translation", "answer shortening",
                                          "continual",         "augmentation"};
  std::vector<std::string> results = TableRows(report.substr(0, cost_at));
  std::vector<std::string> cost = TableRows(report.substr(cost_at));
  Check(results.size() >= order.size() && cost.size() >= order.size(), "table row counts");
  const std::regex result_cell(R"(\| [a-z ]+ \| (\*\*)?\d+\.\d(\*\*)?( \([+-]?\d+\.\d\))? \|)");
  const std::regex cost_cell(R"(\| [a-z ]+ \| \d+\.\d( \([+-]?\d+%\))? \|)");
  for (size_t i = 0; i < order.size(); ++i) {
    Check(results[i].rfind("| " + order[i] + " |", 0) == 0, "results row " + order[i]);
    Check(cost[i].rfind("| " + order[i] + " |", 0) == 0, "cost row " + order[i]);
    Check(std::regex_match(results[i], result_cell), "results cell: " + results[i]);
    Check(std::regex_match(cost[i], cost_cell), "cost cell: " + cost[i]);
  }
  ScoreLedger final_ledger = ScoreLedger::FromCsv(io::ReadFile(ledger));
  Check(final_ledger.Find("continual")->outcome == Outcome::kImproved, "continual row improves");
  Check(fs::exists(dir / "lengths.svg") && fs::exists(dir / "matrix.md") &&
            fs::exists(dir / "index.md"),
        "reports written");

  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Check(seconds < 120.0, "took " + std::to_string(seconds) + " s");
  char detail[96];
  std::snprintf(detail, sizeof(detail), "%zu ledger rows, %.1f s wall", final_ledger.rows().size(),
                seconds);
  return detail;
}

// ---------------------------------------------------------------------------

QALabel ReviewLabel(const std::string& id, int words, std::mt19937_64& rng) {
  std::string answer = RandomText(rng, words, words);
  QALabel l;
  l.id = id;
  l.question = "question " + id;
  l.answers = {answer};
  l.positive = Passage::Make("p-" + id, "", "opening words " + answer + " closing words");
  return l;
}

std::string AnnotationService() {
  ScratchDir dir("anno");
  std::mt19937_64 rng(1000);
  std::vector<QALabel> labels;
  for (int i = 0; i < 60; ++i) {
    labels.push_back(ReviewLabel("l" + std::to_string(i),
                                 std::uniform_int_distribution<int>(5, 60)(rng), rng));
  }
  io::WriteLabels(dir / "labels.json", labels);
  const fs::path log = dir / "events.jsonl";

  int accepted = 0, rejected = 0;
  std::set<std::string> reasons;
  {
    AnnotationStore store(log);
    store.EnqueueLongAnswers(labels, 30);
    AnnotationServer server(store, labels);
    int port = server.Bind("127.0.0.1", 0);
    Check(port > 0, "bind");
    std::thread serve([&] { server.Serve(); });
    server.WaitUntilReady();
    httplib::Client client("127.0.0.1", port);

    std::vector<std::string> ids;
    for (const auto& [id, t] : store.Snapshot()->tasks) ids.push_back(id);
    ids.push_back("t-missing");
    try {
      for (int req = 0; req < 1000; ++req) {
        const std::string& id = ids[rng() % ids.size()];
        std::string original = "x";
        if (auto t = store.Snapshot()->tasks.find(id); t != store.Snapshot()->tasks.end()) {
          original = t->second.original_answer;
        }
        std::vector<std::string> words = text::SplitWhitespace(original);
        httplib::Result res;
        switch (rng() % 5) {
          case 0: {
            words.resize(std::uniform_int_distribution<size_t>(1, words.size())(rng));
            res = client.Post("/api/tasks/" + id + "/revision",
                              json{{"answer", text::Join(words, " ")}}.dump(), "application/json");
            break;
          }
          case 1:
            res = client.Post("/api/tasks/" + id + "/revision", json{{"answer", " "}}.dump(),
                              "application/json");
            break;
          case 2:
            res = client.Post("/api/tasks/" + id + "/revision",
                              json{{"answer", "never said " + original}}.dump(), "application/json");
            break;
          case 3:
            res = client.Post("/api/tasks/" + id + "/revision",
                              json{{"answer", "opening words " + original}}.dump(),
                              "application/json");
            break;
          default:
            res = client.Post("/api/tasks/" + id + "/skip");
            break;
        }
        Check(static_cast<bool>(res), "request failed");
        if (res->status == 200) {
          ++accepted;
        } else {
          ++rejected;
          if (res->status == 422) reasons.insert(json::parse(res->body)["reason"]);
        }
        // Reopen is store-level; it keeps revised/skipped tasks cycling.
        if (rng() % 4 == 0 && store.Reopen(id).status == StoreStatus::kOk) ++accepted;
      }
    } catch (...) {
      server.Stop();
      serve.join();
      throw;
    }
    server.Stop();
    serve.join();
    Check(Replay(ReadEventLog(log)) == *store.Snapshot(), "replay differs from live state");
  }
  AnnotationStore restarted(log);
  Check(Replay(ReadEventLog(log)) == *restarted.Snapshot(), "restart differs from log");
  Check(reasons == std::set<std::string>{"empty", "not_substring", "longer_than_original"},
        "422 reasons reached: " + std::to_string(reasons.size()));
  Check(accepted > 50 && rejected > 50, "request mix");

  // Zero revisions: export is the input.
  AnnotationStore fresh;
  fresh.EnqueueLongAnswers(labels, 30);
  AnnotationServer server(fresh, labels);
  int port = server.Bind("127.0.0.1", 0);
  std::thread serve([&] { server.Serve(); });
  server.WaitUntilReady();
  httplib::Client client("127.0.0.1", port);
  auto res = client.Post("/api/export", json{{"output_path", dir.S("export.json")}}.dump(),
                         "application/json");
  server.Stop();
  serve.join();
  Check(res && res->status == 200, "export request");
  Check(io::ReadLabels(dir / "export.json") == io::ReadLabels(dir / "labels.json"),
        "zero-revision export differs from input");
  return std::to_string(accepted) + " accepted, " + std::to_string(rejected) +
         " rejected; 3/3 reasons";
}

struct Criterion {
  const char* name;
  std::function<std::string()> run;
};

}  // namespace
}  // namespace mrcdata

int main() {
  using namespace mrcdata;
  const std::vector<Criterion> criteria = {
      {"negative-mining oracle", NegativeMining},
      {"split arithmetic", SplitArithmetic},
      {"metric oracles", MetricOracles},
      {"cost-benefit arithmetic", CostBenefitCells},
      {"mean and sample std", MeanStdRow},
      {"set-construction laws", SetConstructionLaws},
      {"rouge matrix", RougeMatrix},
      {"pivot sweep", PivotSweep},
      {"end-to-end with stub trainer", EndToEnd},
      {"annotation service", AnnotationService},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      detail = c.run();
      ok = true;
    } catch (const CheckFailure& f) {
      detail = f.what;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %s (%s)\n", ok ? "PASS" : "FAIL", c.name, detail.c_str());
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

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

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "mrcdata/analysis.h"
#include "mrcdata/annosvc.h"
#include "mrcdata/augment.h"
#include "mrcdata/backends.h"
#include "mrcdata/cli.h"
#include "mrcdata/error.h"
#include "mrcdata/io.h"
#include "mrcdata/negatives.h"
#include "mrcdata/text.h"
#include "mrcdata/variant.h"

namespace mrcdata::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path RequireInput(const std::string& path, const std::string& what) {
  if (path.empty()) throw UsageError("no " + what + " given");
  if (!fs::exists(path)) throw UsageError("missing input file: " + path);
  return path;
}

std::string HexHash(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string FileHash(const fs::path& path) {
  if (fs::is_directory(path)) {
    uint64_t h = text::Fnv1a64("");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
      h = text::Fnv1a64(f.filename().string(), h);
      h = text::Fnv1a64(io::ReadFile(f), h);
    }
    return HexHash(h);
  }
  return HexHash(text::Fnv1a64(io::ReadFile(path)));
}

// Written beside every output so a run can be traced and replayed.
class RunManifest {
 public:
  RunManifest(std::string command, const PipelineConfig& config)
      : command_(std::move(command)),
        config_hash_(config.Hash()),
        seed_(config.seed),
        started_(std::chrono::steady_clock::now()),
        started_at_(UtcNow()) {}

  void Input(const fs::path& path) {
    inputs_.push_back({{"path", path.string()}, {"hash", FileHash(path)}});
  }
  void Param(const std::string& key, json value) { params_[key] = std::move(value); }

  void WriteBeside(const fs::path& output) const {
    fs::path where = fs::is_directory(output) ? output / "run.manifest.json"
                                              : fs::path(output.string() + ".run.manifest.json");
    ojson j;
    j["command"] = command_;
    j["inputs"] = inputs_;
    j["output"] = output.string();
    j["seed"] = seed_;
    j["config_hash"] = config_hash_;
    j["params"] = params_;
    j["started_at"] = started_at_;
    j["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    io::WriteFile(where, j.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::string config_hash_;
  uint64_t seed_;
  std::chrono::steady_clock::time_point started_;
  std::string started_at_;
  ojson inputs_ = ojson::array();
  ojson params_ = ojson::object();
};

EvalMode ModeOf(const std::string& name) {
  auto mode = ParseEvalMode(name);
  if (!mode) throw UsageError("--mode must be retrieval or reader, got '" + name + "'");
  return *mode;
}

std::vector<TrainingSetVariant> LoadVariants(const std::vector<std::string>& paths,
                                             RunManifest& manifest) {
  std::vector<TrainingSetVariant> out;
  std::set<std::string> ids;
  for (const std::string& p : paths) {
    RequireInput(p, "variant path");
    manifest.Input(p);
    std::vector<TrainingSetVariant> loaded;
    if (fs::is_directory(p)) {
      loaded = ReadVariantDir(p);
    } else {
      loaded.push_back(ReadVariant(p));
    }
    for (TrainingSetVariant& v : loaded) {
      if (!ids.insert(v.id).second) throw UsageError("duplicate variant id " + v.id);
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::pair<std::string, std::string> NamedPath(const std::string& spec, const std::string& flag) {
  size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw UsageError(flag + " expects NAME=PATH, got '" + spec + "'");
  }
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

ScoreLedger ReadLedger(const std::string& path, RunManifest& manifest) {
  RequireInput(path, "--ledger");
  manifest.Input(path);
  return ScoreLedger::FromCsv(io::ReadFile(path));
}

// Copy of `ledger` without rows of `family`, so re-running a stage replaces
// its row instead of duplicating it.
ScoreLedger WithoutFamily(const ScoreLedger& ledger, const std::string& family) {
  ScoreLedger out;
  for (const LedgerRow& r : ledger.rows()) {
    if (r.method == family) continue;
    switch (r.outcome) {
      case Outcome::kBaseline:
        out.SetBaseline(r.variant_id, *r.metric, r.ft_seconds, r.gen_seconds);
        break;
      case Outcome::kFailed:
        out.AddFailure(r.variant_id, r.method, r.ft_seconds, r.gen_seconds);
        break;
      case Outcome::kNotApplicable:
        out.AddNotApplicable(r.variant_id, r.method);
        break;
      default:
        out.AddResult(r.variant_id, r.method, *r.metric, r.ft_seconds, r.gen_seconds);
        break;
    }
  }
  return out;
}

std::vector<int> ParseThreshold(const std::string& s) {
  if (s == "inf" || s == "unbounded") return {kUnboundedThreshold};
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size() && v >= 1) return {v};
  } catch (const std::exception&) {
  }
  throw UsageError("--threshold must be a positive integer or 'inf', got '" + s + "'");
}

std::vector<std::string> ParsePivots(const std::string& s) {
  std::vector<std::string> pivots;
  if (s == "all") {
    for (std::string_view p : PivotLanguages()) pivots.emplace_back(p);
    return pivots;
  }
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = text::Trim(item);
    if (item.empty()) continue;
    if (!IsPivotLanguage(item)) throw UsageError("unknown pivot language '" + item + "'");
    pivots.push_back(item);
  }
  if (pivots.empty()) throw UsageError("--pivots is empty");
  return pivots;
}

std::atomic<AnnotationServer*> g_server{nullptr};

void StopServer(int) {
  if (AnnotationServer* s = g_server.load()) s->Stop();
}

struct Options {
  // shared
  std::string config;
  std::optional<uint64_t> seed;
  int jobs = 0;
  // paths
  std::string docs, labels, passages, train, test, out, dataset, rejected, split_dir, revised,
      plot, ledger, plan, checkpoint, index_dir, index_out, log, ledger_out;
  std::vector<std::string> variants, sets_named, ledgers_named;
  // knobs
  int max_words = 0;
  std::vector<int> ks;
  std::vector<int> set_indices;
  std::string threshold;
  std::string scorer, backend, embedder, synonyms, pivots = "all", translator, mode = "retrieval",
                                                   format = "md", trainer, host = "127.0.0.1",
                                                   token;
  int port = 8080;
  int review_threshold = 0;
  bool per_set = false;
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) { Build(); }

  CLI::App& app() { return app_; }
  const std::function<void()>& action() const { return action_; }

 private:
  CLI::App* Command(CLI::App* parent, const std::string& name, const std::string& desc,
                    std::function<void()> fn) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->add_option("--config", o_.config, "Pipeline config JSON");
    sub->add_option("--seed", o_.seed, "Overrides the config seed");
    sub->add_option("--jobs", o_.jobs, "Worker threads (overrides config)");
    sub->callback([this, fn = std::move(fn)] { action_ = fn; });
    return sub;
  }

  PipelineConfig Config() const {
    PipelineConfig c;
    if (!o_.config.empty()) c = PipelineConfig::Load(RequireInput(o_.config, "--config"));
    if (o_.seed) c.seed = *o_.seed;
    if (o_.jobs > 0) c.jobs = o_.jobs;
    return c;
  }

  void Build();
  void Ingest();
  void Clean();
  void Chunk();
  void Validate();
  void MakeSplits();
  void Stats();
  void GenNegatives();
  void GenParaphrase();
  void GenSubstitute();
  void GenBacktranslate();
  void SimMatrix();
  void Train();
  void Eval();
  void PlanContinualCmd();
  void RunContinualCmd();
  void ConcatAugment();
  void CostBench();
  void AnnotateServe();

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Training-set quality tools for extractive QA: corpus preparation, negative "
                "mining, question augmentation, fine-tuning orchestration and answer review.",
                "mrcdata"};
  Options o_;
  std::function<void()> action_;
};

void Cli::Build() {
  app_.require_subcommand(1);
  CLI::App* s;

  s = Command(&app_, "ingest", "Chunk documents, link and validate labels", [this] { Ingest(); });
  s->add_option("--docs", o_.docs, "Documents JSONL {id,title,text}");
  s->add_option("--labels", o_.labels, "Labels JSON");
  s->add_option("--dataset", o_.dataset, "Dataset name in the config (default paths)");
  s->add_option("--max-words", o_.max_words, "Chunk size in words (config default 300)");
  s->add_option("--out", o_.out, "Output directory")->required();

  s = Command(&app_, "clean", "Strip heading keywords, lowercase and trim documents",
              [this] { Clean(); });
  s->add_option("--in", o_.docs, "Documents JSONL")->required();
  s->add_option("--out", o_.out, "Cleaned documents JSONL")->required();

  s = Command(&app_, "chunk", "Clean and chunk documents into passages", [this] { Chunk(); });
  s->add_option("--in", o_.docs, "Documents JSONL")->required();
  s->add_option("--max-words", o_.max_words, "Chunk size in words (config default 300)");
  s->add_option("--out", o_.out, "Passages JSONL")->required();

  s = Command(&app_, "validate", "Reject labels whose answer is not in their context",
              [this] { Validate(); });
  s->add_option("--labels", o_.labels, "Labels JSON")->required();
  s->add_option("--passages", o_.passages, "Passages JSONL")->required();
  s->add_option("--out", o_.out, "Valid labels JSON")->required();
  s->add_option("--rejected", o_.rejected, "Rejections JSON");

  s = Command(&app_, "make-splits", "Seeded 80:10:10 train/dev/test split",
              [this] { MakeSplits(); });
  s->add_option("--labels", o_.labels, "Labels JSON")->required();
  s->add_option("--out", o_.out, "Output directory for train/dev/test.json")->required();

  s = Command(&app_, "stats", "Answer-length statistics and before/after report",
              [this] { Stats(); });
  s->add_option("--split-dir", o_.split_dir, "Directory holding train/dev/test.json");
  s->add_option("--labels", o_.labels, "Labels before revision");
  s->add_option("--revised", o_.revised, "Labels after revision (same ids and order)");
  s->add_option("--plot", o_.plot, "SVG histogram of answer lengths before/after");
  s->add_option("--format", o_.format, "md or csv")->check(CLI::IsMember({"md", "csv"}));
  s->add_option("--out", o_.out, "Output file (default stdout)");

  CLI::App* gen = app_.add_subcommand("gen", "Generate training-set variants");
  gen->require_subcommand(1);

  s = Command(gen, "negatives", "Mine k lowest-similarity negatives per question",
              [this] { GenNegatives(); });
  s->add_option("--train", o_.train, "Training labels JSON")->required();
  s->add_option("--passages", o_.passages, "Passages JSONL")->required();
  s->add_option("--k", o_.ks, "Negatives per question, 1..5 (default all)")
      ->check(CLI::Range(1, 5));
  s->add_option("--threshold", o_.threshold, "Per-passage occurrence cap or 'inf'");
  s->add_option("--scorer", o_.scorer, "jaccard, rouge1 or embedding");
  s->add_option("--embedder", o_.embedder, "hash, hash:<dim> or table:<path>");
  s->add_option("--out", o_.out, "Output directory")->required();

  s = Command(gen, "paraphrase", "Paraphrase questions into six ranked sets",
              [this] { GenParaphrase(); });
  s->add_option("--train", o_.train, "Training labels JSON")->required();
  s->add_option("--backend", o_.backend, "echo, rule or table:<path>");
  s->add_option("--sets", o_.set_indices, "Set indices to write, 1..6 (default all)")
      ->check(CLI::Range(1, 6));
  s->add_option("--embedder", o_.embedder, "hash, hash:<dim> or table:<path>");
  s->add_option("--out", o_.out, "Output directory")->required();

  s = Command(gen, "substitute", "Keyword synonym substitution into six ranked sets",
              [this] { GenSubstitute(); });
  s->add_option("--train", o_.train, "Training labels JSON")->required();
  s->add_option("--synonyms", o_.synonyms, "Synonym table JSON {word: [synonyms]}");
  s->add_option("--embedder", o_.embedder, "hash, hash:<dim> or table:<path>");
  s->add_option("--out", o_.out, "Output directory")->required();

  s = Command(gen, "backtranslate", "Back-translate questions through pivot languages",
              [this] { GenBacktranslate(); });
  s->add_option("--train", o_.train, "Training labels JSON")->required();
  s->add_option("--pivots", o_.pivots, "'all' or comma-separated pivot codes");
  s->add_option("--translator", o_.translator, "identity, reverse, rule or table:<path>");
  s->add_option("--embedder", o_.embedder, "hash, hash:<dim> or table:<path>");
  s->add_option("--out", o_.out, "Output directory")->required();

  s = Command(&app_, "simmatrix", "Average pairwise ROUGE-1 between question sets",
              [this] { SimMatrix(); });
  s->add_option("--set", o_.sets_named, "NAME=PATH of an index-aligned label file")->required();
  s->add_option("--format", o_.format, "md or csv")->check(CLI::IsMember({"md", "csv"}));
  s->add_option("--out", o_.out, "Matrix output file")->required();
  s->add_option("--index-dir", o_.index_dir, "Variant directory for the similarity-index table");
  s->add_option("--index-out", o_.index_out, "Similarity-index table output (Markdown)");

  s = Command(&app_, "train", "Fine-tune baseline and each variant; write the score ledger",
              [this] { Train(); });
  s->add_option("--original", o_.train, "Original training labels JSON")->required();
  s->add_option("--variants", o_.variants, "Variant files or directories");
  s->add_option("--test", o_.test, "Test labels JSON")->required();
  s->add_option("--mode", o_.mode, "retrieval or reader");
  s->add_option("--trainer", o_.trainer, "Trainer backend (config default stub)");
  s->add_option("--ledger", o_.ledger, "Ledger CSV to write")->required();

  s = Command(&app_, "eval", "Evaluate one checkpoint on a test set", [this] { Eval(); });
  s->add_option("--checkpoint", o_.checkpoint, "Checkpoint handle")->required();
  s->add_option("--test", o_.test, "Test labels JSON")->required();
  s->add_option("--mode", o_.mode, "retrieval or reader");
  s->add_option("--trainer", o_.trainer, "Trainer backend (config default stub)");
  s->add_option("--out", o_.out, "Metric JSON output");

  s = Command(&app_, "plan-continual", "Order improving variants for continual fine-tuning",
              [this] { PlanContinualCmd(); });
  s->add_option("--ledger", o_.ledger, "Ledger CSV")->required();
  s->add_flag("--per-set", o_.per_set, "Keep every improving set, not one per method");
  s->add_option("--out", o_.out, "Plan JSON")->required();

  s = Command(&app_, "run-continual", "Chain fine-tuning along a plan; add the continual row",
              [this] { RunContinualCmd(); });
  s->add_option("--plan", o_.plan, "Plan JSON")->required();
  s->add_option("--ledger", o_.ledger, "Ledger CSV")->required();
  s->add_option("--variants", o_.variants, "Variant files or directories")->required();
  s->add_option("--test", o_.test, "Test labels JSON")->required();
  s->add_option("--mode", o_.mode, "retrieval or reader");
  s->add_option("--trainer", o_.trainer, "Trainer backend (config default stub)");
  s->add_option("--ledger-out", o_.ledger_out, "Updated ledger CSV (default: overwrite)");

  s = Command(&app_, "concat-augment",
              "Concatenate the best improving set of each method; add the augmentation row",
              [this] { ConcatAugment(); });
  s->add_option("--ledger", o_.ledger, "Ledger CSV")->required();
  s->add_option("--variants", o_.variants, "Variant files or directories")->required();
  s->add_option("--test", o_.test, "Test labels JSON")->required();
  s->add_option("--mode", o_.mode, "retrieval or reader");
  s->add_option("--trainer", o_.trainer, "Trainer backend (config default stub)");
  s->add_option("--out", o_.out, "Directory for the concatenated set")->required();
  s->add_option("--ledger-out", o_.ledger_out, "Updated ledger CSV (default: overwrite)");

  s = Command(&app_, "costbench", "Render result and cost-benefit tables from ledgers",
              [this] { CostBench(); });
  s->add_option("--ledger", o_.ledgers_named, "DATASET=PATH of a ledger CSV")->required();
  s->add_option("--mode", o_.mode, "retrieval or reader");
  s->add_option("--format", o_.format, "md or csv")->check(CLI::IsMember({"md", "csv"}));
  s->add_option("--out", o_.out, "Output file (default stdout)");

  CLI::App* annotate = app_.add_subcommand("annotate", "Answer-shortening review service");
  annotate->require_subcommand(1);
  s = Command(annotate, "serve", "Serve the review API over HTTP", [this] { AnnotateServe(); });
  s->add_option("--labels", o_.labels, "Labels JSON to review and export")->required();
  s->add_option("--log", o_.log, "Event log JSONL (replayed at startup)")->required();
  s->add_option("--dataset", o_.dataset, "Dataset name for the review threshold");
  s->add_option("--threshold", o_.review_threshold, "Review answers longer than this many words");
  s->add_option("--host", o_.host, "Bind address");
  s->add_option("--port", o_.port, "Port (0 picks a free one)");
  s->add_option("--token", o_.token, "Shared token required in X-Annotation-Token");
}

void Cli::Ingest() {
  PipelineConfig c = Config();
  std::string docs = o_.docs;
  std::string labels = o_.labels;
  if (!o_.dataset.empty()) {
    auto it = c.datasets.find(o_.dataset);
    if (it == c.datasets.end()) throw UsageError("dataset '" + o_.dataset + "' not in config");
    if (docs.empty()) docs = it->second.documents;
    if (labels.empty()) labels = it->second.labels;
  }
  RunManifest m("ingest", c);
  RequireInput(docs, "--docs");
  RequireInput(labels, "--labels");
  m.Input(docs);
  m.Input(labels);
  int max_words = o_.max_words > 0 ? o_.max_words : c.max_words;
  m.Param("max_words", max_words);

  IngestResult ingest =
      IngestCorpus(io::ReadDocumentsJsonl(docs), io::ReadLabels(labels), max_words, c.cleaning);
  ValidationResult checked = ValidateLabels(ingest.labels, IndexPassages(ingest.passages));

  fs::path out = o_.out;
  io::WritePassagesJsonl(out / "passages.jsonl", ingest.passages);
  io::WriteLabels(out / "labels.json", checked.valid);
  io::WriteLabels(out / "fragmented.json", ingest.fragmented);
  ojson rejected = ojson::array();
  for (const Rejection& r : checked.rejected) {
    rejected.push_back({{"id", r.label.id}, {"reason", RejectReasonName(r.reason)}});
  }
  io::WriteFile(out / "rejected.json", rejected.dump(2) + "\n");
  m.WriteBeside(out);
  out_ << "passages " << ingest.passages.size() << "\nlabels " << checked.valid.size()
       << "\nrejected " << checked.rejected.size() << "\nfragmented " << ingest.fragmented.size()
       << "\n";
}

void Cli::Clean() {
  PipelineConfig c = Config();
  RunManifest m("clean", c);
  RequireInput(o_.docs, "--in");
  m.Input(o_.docs);
  std::string jsonl;
  for (const Document& d : io::ReadDocumentsJsonl(o_.docs)) {
    ojson j;
    j["id"] = d.id;
    j["title"] = d.title;
    j["text"] = CleanText(d.text, c.cleaning);
    jsonl += j.dump() + "\n";
  }
  io::WriteFile(o_.out, jsonl);
  m.WriteBeside(o_.out);
}

void Cli::Chunk() {
  PipelineConfig c = Config();
  RunManifest m("chunk", c);
  RequireInput(o_.docs, "--in");
  m.Input(o_.docs);
  int max_words = o_.max_words > 0 ? o_.max_words : c.max_words;
  m.Param("max_words", max_words);
  std::vector<Passage> passages;
  for (const Document& d : io::ReadDocumentsJsonl(o_.docs)) {
    for (Passage& p : ChunkDocument(d, max_words, c.cleaning)) passages.push_back(std::move(p));
  }
  io::WritePassagesJsonl(o_.out, passages);
  m.WriteBeside(o_.out);
  out_ << "passages " << passages.size() << "\n";
}

void Cli::Validate() {
  PipelineConfig c = Config();
  RunManifest m("validate", c);
  RequireInput(o_.labels, "--labels");
  RequireInput(o_.passages, "--passages");
  m.Input(o_.labels);
  m.Input(o_.passages);
  ValidationResult r =
      ValidateLabels(io::ReadLabels(o_.labels), IndexPassages(io::ReadPassagesJsonl(o_.passages)));
  io::WriteLabels(o_.out, r.valid);
  m.WriteBeside(o_.out);
  std::map<std::string, int> by_reason;
  ojson rejected = ojson::array();
  for (const Rejection& x : r.rejected) {
    ++by_reason[std::string(RejectReasonName(x.reason))];
    rejected.push_back({{"id", x.label.id}, {"reason", RejectReasonName(x.reason)}});
  }
  if (!o_.rejected.empty()) {
    io::WriteFile(o_.rejected, rejected.dump(2) + "\n");
    m.WriteBeside(o_.rejected);
  }
  out_ << "valid " << r.valid.size() << "\nrejected " << r.rejected.size() << "\n";
  for (const auto& [reason, n] : by_reason) out_ << "  " << reason << " " << n << "\n";
}

void Cli::MakeSplits() {
  PipelineConfig c = Config();
  RunManifest m("make-splits", c);
  RequireInput(o_.labels, "--labels");
  m.Input(o_.labels);
  DatasetSplit split = SplitDataset(io::ReadLabels(o_.labels), c.seed);
  fs::path out = o_.out;
  io::WriteLabels(out / "train.json", split.train);
  io::WriteLabels(out / "dev.json", split.dev);
  io::WriteLabels(out / "test.json", split.test);
  m.WriteBeside(out);
  out_ << "train " << split.train.size() << "\ndev " << split.dev.size() << "\ntest "
       << split.test.size() << "\n";
}

void Cli::Stats() {
  PipelineConfig c = Config();
  RunManifest m("stats", c);
  const bool csv = o_.format == "csv";
  std::string report;
  if (!o_.split_dir.empty()) {
    fs::path dir = RequireInput(o_.split_dir, "--split-dir");
    m.Input(dir);
    report += csv ? "split,count,mean_words\n"
                  : "| split | labels | mean answer words |\n|---|---:|---:|\n";
    for (const char* name : {"train", "dev", "test"}) {
      fs::path p = dir / (std::string(name) + ".json");
      RequireInput(p.string(), "split file");
      AnswerLengthStats s = ComputeAnswerLengthStats(io::ReadLabels(p));
      std::string mean = s.mean_words ? FormatFixed(*s.mean_words, 2) : "";
      report += csv ? std::string(name) + "," + std::to_string(s.count) + "," + mean + "\n"
                    : "| " + std::string(name) + " | " + std::to_string(s.count) + " | " +
                          (mean.empty() ? "-" : mean) + " |\n";
    }
  }
  if (!o_.labels.empty()) {
    RequireInput(o_.labels, "--labels");
    m.Input(o_.labels);
    std::vector<QALabel> before = io::ReadLabels(o_.labels);
    std::vector<QALabel> after = before;
    if (!o_.revised.empty()) {
      RequireInput(o_.revised, "--revised");
      m.Input(o_.revised);
      after = io::ReadLabels(o_.revised);
    }
    LengthReport lr = MakeLengthReport(before, after);
    if (!report.empty()) report += "\n";
    report += csv ? lr.ToCsv() : lr.ToMarkdown();
    if (!o_.plot.empty()) {
      std::vector<std::string> categories;
      for (size_t i = 0; i < lr.before.size(); ++i) categories.push_back(std::to_string(i + 1));
      SvgPlotter().GroupedBars(o_.plot, "Answer length (words)", categories,
                               {{"before", lr.before}, {"after", lr.after}});
      m.WriteBeside(o_.plot);
    }
  }
  if (report.empty()) throw UsageError("stats needs --split-dir or --labels");
  if (o_.out.empty()) {
    out_ << report;
  } else {
    io::WriteFile(o_.out, report);
    m.WriteBeside(o_.out);
  }
}

void Cli::GenNegatives() {
  PipelineConfig c = Config();
  RunManifest m("gen negatives", c);
  RequireInput(o_.train, "--train");
  RequireInput(o_.passages, "--passages");
  m.Input(o_.train);
  m.Input(o_.passages);
  int threshold = o_.threshold.empty() ? c.neg_threshold : ParseThreshold(o_.threshold).front();
  std::vector<int> ks = o_.ks.empty() ? std::vector<int>{1, 2, 3, 4, 5} : o_.ks;
  std::string scorer_spec = o_.scorer.empty() ? c.scorer : o_.scorer;
  auto embedder = MakeEmbedder(o_.embedder.empty() ? c.embedder : o_.embedder, 0);
  auto scorer = MakeScorer(scorer_spec, *embedder);
  m.Param("k", ks);
  m.Param("threshold", threshold == kUnboundedThreshold ? json(nullptr) : json(threshold));
  m.Param("scorer", scorer->name());

  std::vector<TrainingSetVariant> suites = BuildNegativeSuites(
      io::ReadLabels(o_.train), io::ReadPassagesJsonl(o_.passages), *scorer, ks, threshold, c.jobs);
  for (const TrainingSetVariant& v : suites) {
    WriteVariant(o_.out, v);
    out_ << v.id << " " << v.labels.size() << " labels\n";
  }
  m.WriteBeside(o_.out);
}

void Cli::GenParaphrase() {
  PipelineConfig c = Config();
  RunManifest m("gen paraphrase", c);
  RequireInput(o_.train, "--train");
  m.Input(o_.train);
  std::mt19937_64 rng(c.seed);
  uint64_t paraphraser_seed = rng();
  uint64_t set_seed = rng();
  std::string backend = o_.backend.empty() ? c.paraphraser : o_.backend;
  if (backend.rfind("table:", 0) == 0) RequireInput(backend.substr(6), "paraphrase table");
  auto paraphraser = MakeParaphraser(backend, paraphraser_seed);
  auto embedder = MakeEmbedder(o_.embedder.empty() ? c.embedder : o_.embedder, 0);
  m.Param("backend", backend);

  GenerationOptions opts;
  opts.jobs = c.jobs;
  std::vector<TrainingSetVariant> sets =
      GenerateParaphraseSets(io::ReadLabels(o_.train), *paraphraser, *embedder, set_seed, opts);
  std::set<int> wanted(o_.set_indices.begin(), o_.set_indices.end());
  for (const TrainingSetVariant& v : sets) {
    if (!wanted.empty() && wanted.count(*v.set_index) == 0) continue;
    WriteVariant(o_.out, v);
    out_ << v.id << " avg_similarity " << FormatFixed(v.avg_similarity.value_or(0.0), 3) << "\n";
  }
  m.WriteBeside(o_.out);
}

void Cli::GenSubstitute() {
  PipelineConfig c = Config();
  RunManifest m("gen substitute", c);
  RequireInput(o_.train, "--train");
  m.Input(o_.train);
  std::string synonyms = o_.synonyms.empty() ? c.synonyms : o_.synonyms;
  RequireInput(synonyms, "--synonyms table");
  m.Input(synonyms);
  std::mt19937_64 rng(c.seed);
  uint64_t set_seed = rng();
  auto embedder = MakeEmbedder(o_.embedder.empty() ? c.embedder : o_.embedder, 0);
  TableSynonymProvider provider = TableSynonymProvider::Load(synonyms);
  LongestTokenExtractor extractor;
  std::vector<TrainingSetVariant> sets = BuildSubstitutionSets(
      io::ReadLabels(o_.train), extractor, provider, *embedder, set_seed, "table");
  for (const TrainingSetVariant& v : sets) {
    WriteVariant(o_.out, v);
    out_ << v.id << " avg_similarity " << FormatFixed(v.avg_similarity.value_or(0.0), 3) << "\n";
  }
  m.WriteBeside(o_.out);
}

void Cli::GenBacktranslate() {
  PipelineConfig c = Config();
  RunManifest m("gen backtranslate", c);
  RequireInput(o_.train, "--train");
  m.Input(o_.train);
  std::vector<std::string> pivots = ParsePivots(o_.pivots);
  std::string translator = o_.translator.empty() ? c.translator : o_.translator;
  if (translator.rfind("table:", 0) == 0) {
    RequireInput(translator.substr(6), "translation table");
    m.Input(translator.substr(6));
  }
  auto embedder = MakeEmbedder(o_.embedder.empty() ? c.embedder : o_.embedder, 0);
  m.Param("pivots", pivots);
  m.Param("translator", translator);
  std::vector<TrainingSetVariant> sets = BackTranslationSweep(
      io::ReadLabels(o_.train), pivots, MakeTranslatorFactory(translator), embedder.get());
  for (const TrainingSetVariant& v : sets) {
    WriteVariant(o_.out, v);
    out_ << v.id << " warnings " << v.warnings << "\n";
    if (v.warnings > 0) {
      err_ << "warning: " << v.id << ": " << v.warnings
           << " question(s) kept unchanged after translation failures\n";
    }
  }
  m.WriteBeside(o_.out);
}

void Cli::SimMatrix() {
  PipelineConfig c = Config();
  RunManifest m("simmatrix", c);
  MethodQuestionSets sets;
  for (const std::string& spec : o_.sets_named) {
    auto [name, path] = NamedPath(spec, "--set");
    RequireInput(path, "--set");
    m.Input(path);
    std::vector<std::string> questions;
    for (const QALabel& l : io::ReadLabels(path)) questions.push_back(l.question);
    sets.Add(name, std::move(questions));
  }
  if (sets.methods.size() < 2) throw UsageError("simmatrix needs at least two --set entries");
  SimilarityMatrix matrix = MethodSimilarityMatrix(sets);
  io::WriteFile(o_.out, o_.format == "csv" ? matrix.ToCsv() : matrix.ToMarkdown());
  m.WriteBeside(o_.out);
  if (!o_.index_dir.empty()) {
    RequireInput(o_.index_dir, "--index-dir");
    std::string table = RenderSimilarityIndexTable(ReadVariantDir(o_.index_dir));
    if (o_.index_out.empty()) {
      out_ << table;
    } else {
      io::WriteFile(o_.index_out, table);
      m.WriteBeside(o_.index_out);
    }
  }
}

void Cli::Train() {
  PipelineConfig c = Config();
  RunManifest m("train", c);
  EvalMode mode = ModeOf(o_.mode);
  RequireInput(o_.train, "--original");
  RequireInput(o_.test, "--test");
  m.Input(o_.train);
  m.Input(o_.test);
  std::vector<TrainingSetVariant> variants = LoadVariants(o_.variants, m);
  auto trainer = MakeTrainer(o_.trainer.empty() ? c.trainer : o_.trainer, c.trainer_options);
  SuiteOptions opts;
  opts.hyperparams = c.HyperparamsFor(mode, false);
  m.Param("mode", EvalModeName(mode));
  m.Param("hyperparams", opts.hyperparams.ToJson());

  ScoreLedger ledger =
      RunIndividualSuite(c.start_checkpoint, MakeOriginalVariant(io::ReadLabels(o_.train)),
                         variants, *trainer, io::ReadLabels(o_.test), mode, opts);
  io::WriteFile(o_.ledger, ledger.ToCsv());
  m.WriteBeside(o_.ledger);
  for (const LedgerRow& r : ledger.rows()) {
    if (r.outcome == Outcome::kFailed) err_ << "warning: fine-tuning failed for " << r.variant_id << "\n";
  }
  out_ << ledger.ToCsv();
}

void Cli::Eval() {
  PipelineConfig c = Config();
  RunManifest m("eval", c);
  EvalMode mode = ModeOf(o_.mode);
  RequireInput(o_.test, "--test");
  m.Input(o_.test);
  auto trainer = MakeTrainer(o_.trainer.empty() ? c.trainer : o_.trainer, c.trainer_options);
  double metric = Evaluate(*trainer, o_.checkpoint, io::ReadLabels(o_.test), mode);
  ojson j;
  j["checkpoint"] = o_.checkpoint;
  j["mode"] = EvalModeName(mode);
  j["metric"] = metric;
  if (!o_.out.empty()) {
    io::WriteFile(o_.out, j.dump(2) + "\n");
    m.WriteBeside(o_.out);
  }
  out_ << (mode == EvalMode::kRetrieval ? "recall@1 " : "em ") << FormatFixed(metric, 1) << "\n";
}

void Cli::PlanContinualCmd() {
  PipelineConfig c = Config();
  RunManifest m("plan-continual", c);
  ScoreLedger ledger = ReadLedger(o_.ledger, m);
  std::vector<std::string> plan = PlanContinual(ledger, !o_.per_set);
  io::WriteFile(o_.out, json(plan).dump(2) + "\n");
  m.WriteBeside(o_.out);
  if (plan.empty()) out_ << "no improving sets\n";
  for (const std::string& id : plan) out_ << id << "\n";
}

void Cli::RunContinualCmd() {
  PipelineConfig c = Config();
  RunManifest m("run-continual", c);
  EvalMode mode = ModeOf(o_.mode);
  ScoreLedger ledger = WithoutFamily(ReadLedger(o_.ledger, m), std::string(kFamilyContinual));
  RequireInput(o_.plan, "--plan");
  RequireInput(o_.test, "--test");
  m.Input(o_.plan);
  m.Input(o_.test);
  json plan_json = json::parse(io::ReadFile(o_.plan), nullptr, false);
  if (plan_json.is_discarded() || !plan_json.is_array()) {
    throw UsageError(o_.plan + ": plan must be a JSON array of variant ids");
  }
  std::vector<std::string> plan = plan_json.get<std::vector<std::string>>();
  std::vector<TrainingSetVariant> variants = LoadVariants(o_.variants, m);
  std::map<std::string, const TrainingSetVariant*> by_id;
  for (const TrainingSetVariant& v : variants) by_id[v.id] = &v;
  auto trainer = MakeTrainer(o_.trainer.empty() ? c.trainer : o_.trainer, c.trainer_options);
  Hyperparams hp = c.HyperparamsFor(mode, true);
  m.Param("plan", plan);
  m.Param("hyperparams", hp.ToJson());

  const std::string id(kFamilyContinual);
  if (plan.empty()) {
    ledger.AddNotApplicable(id, id);
    out_ << "continual N/A: no improving sets\n";
  } else {
    try {
      ContinualResult r = RunContinual(plan, c.start_checkpoint, by_id, *trainer, hp,
                                       io::ReadLabels(o_.test), mode);
      const LedgerRow& row = ledger.AddResult(id, id, r.metric, r.seconds);
      out_ << "continual " << FormatFixed(r.metric, 1) << " (" << OutcomeName(row.outcome) << ")\n";
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInvalidArgument) throw;
      ledger.AddFailure(id, id);
      err_ << "warning: continual chain failed: " << e.what() << "\n";
    }
  }
  std::string out = o_.ledger_out.empty() ? o_.ledger : o_.ledger_out;
  io::WriteFile(out, ledger.ToCsv());
  m.WriteBeside(out);
}

void Cli::ConcatAugment() {
  PipelineConfig c = Config();
  RunManifest m("concat-augment", c);
  EvalMode mode = ModeOf(o_.mode);
  ScoreLedger ledger = WithoutFamily(ReadLedger(o_.ledger, m), std::string(kFamilyAugmentation));
  RequireInput(o_.test, "--test");
  m.Input(o_.test);
  std::vector<TrainingSetVariant> variants = LoadVariants(o_.variants, m);
  std::map<std::string, const TrainingSetVariant*> by_id;
  for (const TrainingSetVariant& v : variants) by_id[v.id] = &v;

  std::vector<const TrainingSetVariant*> inputs;
  for (const std::string& id : PlanContinual(ledger, true)) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw UsageError("ledger names variant " + id + " not found in --variants");
    inputs.push_back(it->second);
  }
  const std::string id(kFamilyAugmentation);
  if (inputs.empty()) {
    ledger.AddNotApplicable(id, id);
    out_ << "augmentation N/A: no improving sets\n";
  } else {
    TrainingSetVariant concat = ConcatAugmented(inputs, id);
    WriteVariant(o_.out, concat);
    m.WriteBeside(o_.out);
    auto trainer = MakeTrainer(o_.trainer.empty() ? c.trainer : o_.trainer, c.trainer_options);
    Hyperparams hp = c.HyperparamsFor(mode, false);
    m.Param("inputs", concat.backend);
    try {
      FineTuneResult r = trainer->FineTune(c.start_checkpoint, concat, hp, mode);
      double metric = Evaluate(*trainer, r.checkpoint, io::ReadLabels(o_.test), mode);
      const LedgerRow& row = ledger.AddResult(id, id, metric, r.seconds);
      out_ << "augmentation " << concat.labels.size() << " labels, " << FormatFixed(metric, 1)
           << " (" << OutcomeName(row.outcome) << ")\n";
    } catch (const std::exception& e) {
      ledger.AddFailure(id, id);
      err_ << "warning: augmentation fine-tuning failed: " << e.what() << "\n";
    }
  }
  std::string out = o_.ledger_out.empty() ? o_.ledger : o_.ledger_out;
  io::WriteFile(out, ledger.ToCsv());
  m.WriteBeside(out);
}

void Cli::CostBench() {
  PipelineConfig c = Config();
  RunManifest m("costbench", c);
  EvalMode mode = ModeOf(o_.mode);
  DatasetLedgers ledgers;
  for (const std::string& spec : o_.ledgers_named) {
    auto [name, path] = NamedPath(spec, "--ledger");
    ledgers.emplace_back(name, ReadLedger(path, m));
  }
  TableFormat format = o_.format == "csv" ? TableFormat::kCsv : TableFormat::kMarkdown;
  std::string report = RenderResultsTable(ledgers, mode, format) + "\n" +
                       RenderCostTable(ledgers, mode, format);
  if (format == TableFormat::kMarkdown) {
    bool has_negatives = false;
    for (const auto& [name, ledger] : ledgers) {
      for (const LedgerRow& r : ledger.rows()) has_negatives |= r.method == "negatives";
    }
    if (has_negatives) {
      report += "\n" + RenderVariantTable(ledgers, "negatives") + "\n" +
                RenderMeanStdTable(ledgers, {"negatives"});
    }
  }
  if (o_.out.empty()) {
    out_ << report;
  } else {
    io::WriteFile(o_.out, report);
    m.WriteBeside(o_.out);
  }
}

void Cli::AnnotateServe() {
  PipelineConfig c = Config();
  RequireInput(o_.labels, "--labels");
  std::vector<QALabel> labels = io::ReadLabels(o_.labels);
  int threshold = o_.review_threshold > 0 ? o_.review_threshold : c.ReviewThreshold(o_.dataset);
  AnnotationStore store(o_.log);
  int created = store.EnqueueLongAnswers(labels, threshold);
  ServerOptions opts;
  opts.token = o_.token;
  AnnotationServer server(store, std::move(labels), opts);
  int port = server.Bind(o_.host, o_.port);
  if (port < 0) throw std::runtime_error("cannot bind " + o_.host + ":" + std::to_string(o_.port));
  out_ << "queued " << created << " new task(s), " << store.Stats().total << " total\n"
       << "listening on http://" << o_.host << ":" << port << "\n"
       << std::flush;
  g_server = &server;
  auto old_int = std::signal(SIGINT, StopServer);
  auto old_term = std::signal(SIGTERM, StopServer);
  server.Serve();
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);
  g_server = nullptr;
}

bool IsValidationCode(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kTooFewLabels:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kParse:
      return true;
    default:
      return false;
  }
}

void CollectFlags(const CLI::App* app, const std::string& prefix,
                  std::map<std::string, std::vector<std::string>>& out) {
  for (const CLI::App* sub : app->get_subcommands({})) {
    std::string path = prefix.empty() ? sub->get_name() : prefix + " " + sub->get_name();
    if (sub->get_subcommands({}).empty()) {
      std::vector<std::string> flags;
      for (const CLI::Option* opt : sub->get_options()) {
        for (const std::string& name : opt->get_lnames()) flags.push_back("--" + name);
      }
      out[path] = flags;
    } else {
      CollectFlags(sub, path, out);
    }
  }
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  std::vector<const char*> argv = {"mrcdata"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    cli.app().parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = cli.app().exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (!cli.action()) return 2;
  try {
    cli.action()();
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return IsValidationCode(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

std::map<std::string, std::vector<std::string>> CommandFlags() {
  std::ostringstream sink;
  Cli cli(sink, sink);
  std::map<std::string, std::vector<std::string>> out;
  CollectFlags(&cli.app(), "", out);
  return out;
}

std::string HelpText(const std::string& command_path) {
  std::vector<std::string> args;
  std::stringstream in(command_path);
  std::string word;
  while (in >> word) args.push_back(word);
  args.push_back("--help");
  std::ostringstream out, err;
  Run(args, out, err);
  return out.str();
}

}  // namespace mrcdata::cli

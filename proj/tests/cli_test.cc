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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrcdata/cli.h"
#include "mrcdata/error.h"
#include "mrcdata/harness.h"
#include "mrcdata/io.h"
#include "mrcdata/negatives.h"
#include "test_util.h"

namespace mrcdata {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunCli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

size_t CountFiles(const fs::path& dir, const std::string& suffix) {
  size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name != "run.manifest.json" && name.size() >= suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      ++n;
    }
  }
  return n;
}

class CliTest : public ::testing::Test {
 protected:
  void WriteData(int n_labels, int n_passages = 60) {
    std::mt19937_64 rng(99);
    passages_ = testing::RandomCorpus(rng, n_passages);
    labels_ = testing::RandomLabels(rng, passages_, n_labels);
    io::WritePassagesJsonl(dir_ / "passages.jsonl", passages_);
    io::WriteLabels(dir_ / "labels.json", labels_);
  }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  testing::TempDir dir_;
  std::vector<Passage> passages_;
  std::vector<QALabel> labels_;
};

TEST(CliHelpTest, EveryCommandDocumentsItsFlags) {
  auto commands = cli::CommandFlags();
  for (const char* expected :
       {"ingest", "clean", "chunk", "validate", "make-splits", "stats", "gen negatives",
        "gen paraphrase", "gen substitute", "gen backtranslate", "simmatrix", "train", "eval",
        "plan-continual", "run-continual", "concat-augment", "costbench", "annotate serve"}) {
    EXPECT_EQ(commands.count(expected), 1u) << expected;
  }
  for (const auto& [path, flags] : commands) {
    std::string help = cli::HelpText(path);
    for (const char* common : {"--config", "--seed", "--jobs"}) {
      EXPECT_NE(help.find(common), std::string::npos) << path << " " << common;
    }
    for (const std::string& flag : flags) {
      EXPECT_NE(help.find(flag), std::string::npos) << path << " " << flag;
    }
  }
  CliResult r = RunCli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("make-splits"), std::string::npos);
  EXPECT_EQ(RunCli({"gen", "negatives", "--help"}).code, 0);
}

TEST_F(CliTest, ExitCodes) {
  WriteData(20);
  EXPECT_EQ(RunCli({}).code, 2);
  EXPECT_EQ(RunCli({"no-such-command"}).code, 2);
  EXPECT_EQ(RunCli({"make-splits", "--labels", P("labels.json")}).code, 2);

  CliResult missing = RunCli({"make-splits", "--labels", P("absent.json"), "--out", P("s")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("missing input file: " + P("absent.json")), std::string::npos);

  io::WriteFile(dir_ / "broken.json", "[{\"question\": ");
  EXPECT_EQ(RunCli({"make-splits", "--labels", P("broken.json"), "--out", P("s")}).code, 2);

  // Too few labels for an 80:10:10 split.
  io::WriteLabels(dir_ / "two.json", {labels_[0], labels_[1]});
  EXPECT_EQ(RunCli({"make-splits", "--labels", P("two.json"), "--out", P("s")}).code, 2);

  // Output under a regular file cannot be created: runtime failure.
  io::WriteFile(dir_ / "blocker", "x");
  EXPECT_EQ(RunCli({"make-splits", "--labels", P("labels.json"), "--out", P("blocker/sub")}).code,
            1);
}

TEST_F(CliTest, ConfigValidation) {
  WriteData(20);
  io::WriteFile(dir_ / "bad.json", R"({"seed": 1, "nonsense": true})");
  CliResult r = RunCli({"make-splits", "--config", P("bad.json"), "--labels", P("labels.json"),
                        "--out", P("s")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nonsense"), std::string::npos);
  io::WriteFile(dir_ / "typed.json", R"({"max_words": "many"})");
  EXPECT_EQ(RunCli({"make-splits", "--config", P("typed.json"), "--labels", P("labels.json"),
                    "--out", P("s")})
                .code,
            2);

  auto c = cli::PipelineConfig::FromJson(
      json{{"seed", 7}, {"neg_threshold", nullptr}, {"jobs", 4},
           {"hyperparams", {{"reader", {{"eval_step", 500}}}}}});
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.neg_threshold, kUnboundedThreshold);
  EXPECT_EQ(c.HyperparamsFor(EvalMode::kReader, false).eval_step, 500);
  EXPECT_EQ(c.HyperparamsFor(EvalMode::kReader, true).num_train_epochs, 30);
  EXPECT_EQ(c.HyperparamsFor(EvalMode::kRetrieval, true).num_train_epochs, 60);
  auto same_but_jobs = cli::PipelineConfig::FromJson(
      json{{"seed", 7}, {"neg_threshold", nullptr}, {"jobs", 1},
           {"hyperparams", {{"reader", {{"eval_step", 500}}}}}});
  EXPECT_EQ(c.Hash(), same_but_jobs.Hash());
  EXPECT_EQ(cli::PipelineConfig::FromJson(c.ToJson()).ToJson(), c.ToJson());
  EXPECT_THROW(cli::PipelineConfig::FromJson(json{{"hyperparams", {{"reader", {{"x", 1}}}}}})
                   .HyperparamsFor(EvalMode::kReader, false),
               Error);
}

TEST_F(CliTest, MakeSplitsMatchesRatios) {
  WriteData(957);
  CliResult r = RunCli({"make-splits", "--seed", "3", "--labels", P("labels.json"), "--out",
                        P("splits")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::ReadLabels(dir_ / "splits/train.json").size(), 765u);
  EXPECT_EQ(io::ReadLabels(dir_ / "splits/dev.json").size(), 96u);
  EXPECT_EQ(io::ReadLabels(dir_ / "splits/test.json").size(), 96u);
  json manifest = json::parse(io::ReadFile(dir_ / "splits/run.manifest.json"));
  EXPECT_EQ(manifest["command"], "make-splits");
  EXPECT_EQ(manifest["seed"], 3);
  EXPECT_TRUE(manifest.contains("config_hash"));
  EXPECT_EQ(manifest["inputs"].size(), 1u);
  // Same seed, same split.
  ASSERT_EQ(RunCli({"make-splits", "--seed", "3", "--labels", P("labels.json"), "--out",
                    P("splits2")})
                .code,
            0);
  EXPECT_EQ(io::ReadFile(dir_ / "splits/train.json"), io::ReadFile(dir_ / "splits2/train.json"));
}

TEST_F(CliTest, BacktranslateAllPivots) {
  WriteData(15);
  CliResult r = RunCli({"gen", "backtranslate", "--train", P("labels.json"), "--pivots", "all",
                        "--translator", "identity", "--out", P("bt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(CountFiles(dir_ / "bt", ".manifest.json"), 25u);
  EXPECT_EQ(io::ReadLabels(dir_ / "bt/backtranslation-es.json"), labels_);
  EXPECT_EQ(io::ReadLabels(dir_ / "bt/backtranslation-rw.json"), labels_);
  EXPECT_EQ(RunCli({"gen", "backtranslate", "--train", P("labels.json"), "--pivots", "xx",
                    "--out", P("bt2")})
                .code,
            2);
}

TEST_F(CliTest, NegativesAreByteIdenticalAcrossRuns) {
  WriteData(40);
  for (const char* out : {"n1", "n2"}) {
    CliResult r = RunCli({"gen", "negatives", "--train", P("labels.json"), "--passages",
                          P("passages.jsonl"), "--k", "3", "--threshold", "inf", "--out", P(out)});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(io::ReadFile(dir_ / "n1/negatives-k3.json"), io::ReadFile(dir_ / "n2/negatives-k3.json"));
  auto mined = io::ReadLabels(dir_ / "n1/negatives-k3.json");
  ASSERT_EQ(mined.size(), labels_.size());
  for (const QALabel& l : mined) EXPECT_EQ(l.negatives.size(), 3u);
  EXPECT_EQ(RunCli({"gen", "negatives", "--train", P("labels.json"), "--passages",
                    P("passages.jsonl"), "--k", "9", "--out", P("n3")})
                .code,
            2);
}

TEST_F(CliTest, SubstituteNeedsSynonyms) {
  WriteData(10);
  EXPECT_EQ(RunCli({"gen", "substitute", "--train", P("labels.json"), "--out", P("sub")}).code, 2);
  io::WriteFile(dir_ / "syn.json", R"({"melatonin": ["hormone"], "patients": ["subjects"]})");
  CliResult r = RunCli({"gen", "substitute", "--train", P("labels.json"), "--synonyms",
                        P("syn.json"), "--out", P("sub")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(CountFiles(dir_ / "sub", ".manifest.json"), 6u);
}

TEST_F(CliTest, IngestChunksAndValidates) {
  std::vector<std::string> docs = {
      R"({"id": "d1", "title": "Sleep", "text": "Melatonin regulates sleep in the brain."})",
      R"({"id": "d2", "title": "Heart", "text": "Insulin affects the heart of older patients."})"};
  io::WriteFile(dir_ / "docs.jsonl", docs[0] + "\n" + docs[1] + "\n");
  std::vector<QALabel> labels = {
      testing::MakeLabel("a", "what regulates sleep?", "melatonin",
                         "melatonin regulates sleep in the brain."),
      testing::MakeLabel("b", "what is absent?", "cortisol",
                         "insulin affects the heart of older patients.")};
  for (QALabel& l : labels) l.positive.id.clear();
  io::WriteLabels(dir_ / "raw.json", labels);
  CliResult r = RunCli({"ingest", "--docs", P("docs.jsonl"), "--labels", P("raw.json"), "--out",
                        P("ingested")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::ReadPassagesJsonl(dir_ / "ingested/passages.jsonl").size(), 2u);
  auto valid = io::ReadLabels(dir_ / "ingested/labels.json");
  ASSERT_EQ(valid.size(), 1u);
  EXPECT_EQ(valid[0].id, "a");
  EXPECT_FALSE(valid[0].positive.id.empty());
  json rejected = json::parse(io::ReadFile(dir_ / "ingested/rejected.json"));
  ASSERT_EQ(rejected.size(), 1u);
  EXPECT_EQ(rejected[0]["id"], "b");
  EXPECT_TRUE(fs::exists(dir_ / "ingested/run.manifest.json"));
}

// train -> plan-continual -> run-continual -> concat-augment -> costbench.
TEST_F(CliTest, PipelineProducesTables) {
  // 100 test labels, so the stub's scores resolve to whole percents.
  WriteData(1000);
  ASSERT_EQ(RunCli({"make-splits", "--labels", P("labels.json"), "--out", P("s")}).code, 0);
  ASSERT_EQ(RunCli({"gen", "paraphrase", "--train", P("s/train.json"), "--out", P("vars")}).code,
            0);
  ASSERT_EQ(RunCli({"gen", "negatives", "--train", P("s/train.json"), "--passages",
                    P("passages.jsonl"), "--k", "1", "--k", "2", "--threshold", "inf", "--out",
                    P("vars")})
                .code,
            0);
  io::WriteFile(dir_ / "config.json",
                R"({"trainer_options": {"base_score": 40.0, "stage_increment": 1.0,
                    "table": {"paraphrase-rule-set1": 42.0, "negatives-k1": 41.0,
                              "negatives-k2": 39.0}}})");
  CliResult train = RunCli({"train", "--config", P("config.json"), "--original", P("s/train.json"),
                            "--variants", P("vars"), "--test", P("s/test.json"), "--mode",
                            "retrieval", "--ledger", P("ledger.csv")});
  ASSERT_EQ(train.code, 0) << train.err;
  ScoreLedger ledger = ScoreLedger::FromCsv(io::ReadFile(dir_ / "ledger.csv"));
  ASSERT_NE(ledger.Find("negatives-k1"), nullptr);

  ASSERT_EQ(RunCli({"plan-continual", "--ledger", P("ledger.csv"), "--out", P("plan.json")}).code,
            0);
  json plan = json::parse(io::ReadFile(dir_ / "plan.json"));
  ASSERT_GE(plan.size(), 2u);
  EXPECT_EQ(plan[0], "paraphrase-rule-set1");

  CliResult cont = RunCli({"run-continual", "--config", P("config.json"), "--plan",
                           P("plan.json"), "--ledger", P("ledger.csv"), "--variants", P("vars"),
                           "--test", P("s/test.json"), "--mode", "retrieval"});
  ASSERT_EQ(cont.code, 0) << cont.err;
  CliResult aug = RunCli({"concat-augment", "--config", P("config.json"), "--ledger",
                          P("ledger.csv"), "--variants", P("vars"), "--test", P("s/test.json"),
                          "--mode", "retrieval", "--out", P("aug")});
  ASSERT_EQ(aug.code, 0) << aug.err;
  ledger = ScoreLedger::FromCsv(io::ReadFile(dir_ / "ledger.csv"));
  ASSERT_NE(ledger.Find("continual"), nullptr);
  ASSERT_NE(ledger.Find("augmentation"), nullptr);
  EXPECT_EQ(ledger.Find("continual")->outcome, Outcome::kImproved);

  CliResult bench = RunCli({"costbench", "--ledger", "SleepQA=" + P("ledger.csv"), "--mode",
                            "retrieval", "--out", P("report.md")});
  ASSERT_EQ(bench.code, 0) << bench.err;
  std::string report = io::ReadFile(dir_ / "report.md");
  EXPECT_NE(report.find("Results of fine-tuned retrieval models"), std::string::npos);
  EXPECT_NE(report.find("Total time spent (in hours)"), std::string::npos);
  EXPECT_NE(report.find("| continual |"), std::string::npos);
  EXPECT_NE(report.find("| augmentation |"), std::string::npos);

  CliResult eval = RunCli({"eval", "--checkpoint", "stub:62.5:x", "--test", P("s/test.json"),
                           "--mode", "reader", "--out", P("eval.json")});
  ASSERT_EQ(eval.code, 0) << eval.err;
  EXPECT_DOUBLE_EQ(json::parse(io::ReadFile(dir_ / "eval.json"))["metric"].get<double>(), 63.0);
}

TEST_F(CliTest, SimMatrixAndStats) {
  WriteData(30);
  CliResult r = RunCli({"simmatrix", "--set", "original=" + P("labels.json"), "--set",
                        "copy=" + P("labels.json"), "--format", "csv", "--out", P("m.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::ReadFile(dir_ / "m.csv"), "method,original,copy\noriginal,100.00,\ncopy,100.00,100.00\n");
  EXPECT_EQ(RunCli({"simmatrix", "--set", "only=" + P("labels.json"), "--out", P("m2.csv")}).code,
            2);

  std::vector<QALabel> revised = labels_;
  revised[0].answers[0] = "x";
  io::WriteLabels(dir_ / "revised.json", revised);
  CliResult s = RunCli({"stats", "--labels", P("labels.json"), "--revised", P("revised.json"),
                        "--plot", P("lengths.svg"), "--format", "csv", "--out", P("len.csv")});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(io::ReadFile(dir_ / "len.csv").rfind("words,before,after\n", 0), 0u);
  EXPECT_TRUE(fs::exists(dir_ / "lengths.svg"));
}

}  // namespace
}  // namespace mrcdata

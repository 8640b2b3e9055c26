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

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "mrcdata/error.h"
#include "mrcdata/harness.h"

namespace mrcdata {

using nlohmann::json;
using nlohmann::ordered_json;

Hyperparams Hyperparams::ForMode(EvalMode mode, bool continual) {
  Hyperparams h;
  if (mode == EvalMode::kRetrieval) {
    h.warmup_steps = 100;
    h.num_train_epochs = continual ? 60 : 30;
  } else {
    h.warmup_steps = 0;
    h.num_train_epochs = continual ? 30 : 10;
  }
  return h;
}

ordered_json Hyperparams::ToJson() const {
  ordered_json j;
  j["batch_size"] = batch_size;
  j["dev_batch_size"] = dev_batch_size;
  j["adam_eps"] = adam_eps;
  j["adam_betas"] = {adam_betas.first, adam_betas.second};
  j["max_grad_norm"] = max_grad_norm;
  j["weight_decay"] = weight_decay;
  j["learning_rate"] = learning_rate;
  j["warmup_steps"] = warmup_steps;
  j["gradient_accumulation_steps"] = gradient_accumulation_steps;
  j["num_train_epochs"] = num_train_epochs;
  j["eval_step"] = eval_step;
  j["log_batch_step"] = log_batch_step;
  j["train_rolling_loss_step"] = train_rolling_loss_step;
  j["other_negatives"] = other_negatives;
  j["hard_negatives"] = hard_negatives;
  j["val_av_rank_hard_neg"] = val_av_rank_hard_neg;
  j["val_av_rank_other_neg"] = val_av_rank_other_neg;
  j["val_av_rank_bsz"] = val_av_rank_bsz;
  j["val_av_rank_max_qs"] = val_av_rank_max_qs;
  j["eval_per_epoch"] = eval_per_epoch;
  return j;
}

void Hyperparams::Apply(const json& overrides) {
  if (!overrides.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "hyperparameter overrides must be an object");
  }
  auto positive_int = [](int& field) {
    return [&field](const std::string& key, const json& v) {
      if (!v.is_number_integer() || v.get<int>() < 1) {
        throw Error(ErrorCode::kInvalidArgument, key + " must be a positive integer");
      }
      field = v.get<int>();
    };
  };
  auto non_negative_int = [](int& field) {
    return [&field](const std::string& key, const json& v) {
      if (!v.is_number_integer() || v.get<int>() < 0) {
        throw Error(ErrorCode::kInvalidArgument, key + " must be a non-negative integer");
      }
      field = v.get<int>();
    };
  };
  auto real = [](double& field, bool allow_zero) {
    return [&field, allow_zero](const std::string& key, const json& v) {
      if (!v.is_number() || v.get<double>() < 0.0 || (!allow_zero && v.get<double>() == 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, key + " must be a " +
                                                     (allow_zero ? "non-negative" : "positive") +
                                                     " number");
      }
      field = v.get<double>();
    };
  };
  const std::unordered_map<std::string, std::function<void(const std::string&, const json&)>>
      setters = {
          {"batch_size", positive_int(batch_size)},
          {"dev_batch_size", positive_int(dev_batch_size)},
          {"adam_eps", real(adam_eps, false)},
          {"adam_betas",
           [this](const std::string& key, const json& v) {
             if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
               throw Error(ErrorCode::kInvalidArgument, key + " must be a pair of numbers");
             }
             adam_betas = {v[0].get<double>(), v[1].get<double>()};
           }},
          {"max_grad_norm", real(max_grad_norm, false)},
          {"weight_decay", real(weight_decay, true)},
          {"learning_rate", real(learning_rate, false)},
          {"warmup_steps", non_negative_int(warmup_steps)},
          {"gradient_accumulation_steps", positive_int(gradient_accumulation_steps)},
          {"num_train_epochs", positive_int(num_train_epochs)},
          {"eval_step", positive_int(eval_step)},
          {"log_batch_step", positive_int(log_batch_step)},
          {"train_rolling_loss_step", positive_int(train_rolling_loss_step)},
          {"other_negatives", positive_int(other_negatives)},
          {"hard_negatives", non_negative_int(hard_negatives)},
          {"val_av_rank_hard_neg", non_negative_int(val_av_rank_hard_neg)},
          {"val_av_rank_other_neg", positive_int(val_av_rank_other_neg)},
          {"val_av_rank_bsz", positive_int(val_av_rank_bsz)},
          {"val_av_rank_max_qs", positive_int(val_av_rank_max_qs)},
          {"eval_per_epoch", positive_int(eval_per_epoch)},
      };
  for (const auto& [key, value] : overrides.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown hyperparameter \"" + key + "\"");
    }
    it->second(key, value);
  }
}

namespace {

Hyperparams ForVariant(Hyperparams h, const TrainingSetVariant& v) {
  if (v.method == Method::kNegatives && v.k) h.other_negatives = *v.k;
  return h;
}

bool IsPlannable(const LedgerRow& row) {
  return row.outcome == Outcome::kImproved && row.method != kFamilyBaseline &&
         row.method != kFamilyContinual && row.method != kFamilyAugmentation;
}

}  // namespace

ScoreLedger RunIndividualSuite(const std::string& start_checkpoint,
                               const TrainingSetVariant& original,
                               const std::vector<TrainingSetVariant>& variants, Trainer& trainer,
                               const std::vector<QALabel>& test, EvalMode mode,
                               const SuiteOptions& options) {
  ScoreLedger ledger;
  FineTuneResult base = trainer.FineTune(start_checkpoint, original,
                                         ForVariant(options.hyperparams, original), mode);
  ledger.SetBaseline(original.id, Evaluate(trainer, base.checkpoint, test, mode), base.seconds,
                     original.generation_seconds, base.checkpoint);

  for (const TrainingSetVariant& v : variants) {
    try {
      FineTuneResult r =
          trainer.FineTune(start_checkpoint, v, ForVariant(options.hyperparams, v), mode);
      double metric = Evaluate(trainer, r.checkpoint, test, mode);
      ledger.AddResult(v.id, FamilyOf(v.method), metric, r.seconds, v.generation_seconds,
                       r.checkpoint);
    } catch (const std::exception&) {
      ledger.AddFailure(v.id, FamilyOf(v.method), 0.0, v.generation_seconds);
    }
  }
  return ledger;
}

std::vector<std::string> PlanContinual(const ScoreLedger& ledger, bool one_per_family) {
  std::vector<const LedgerRow*> rows;
  for (const LedgerRow& row : ledger.rows()) {
    if (IsPlannable(row)) rows.push_back(&row);
  }
  std::sort(rows.begin(), rows.end(), [](const LedgerRow* a, const LedgerRow* b) {
    long long da = std::llround(a->delta * 10.0);
    long long db = std::llround(b->delta * 10.0);
    if (da != db) return da > db;
    return a->variant_id < b->variant_id;
  });
  std::vector<std::string> plan;
  std::set<std::string> families;
  for (const LedgerRow* row : rows) {
    if (one_per_family && !families.insert(row->method).second) continue;
    plan.push_back(row->variant_id);
  }
  return plan;
}

ContinualResult RunContinual(const std::vector<std::string>& plan,
                             const std::string& start_checkpoint,
                             const std::map<std::string, const TrainingSetVariant*>& variants,
                             Trainer& trainer, const Hyperparams& hyperparams,
                             const std::vector<QALabel>& test, EvalMode mode) {
  if (plan.empty()) throw Error(ErrorCode::kNoImprovingSets, "continual plan is empty");
  ContinualResult result;
  result.checkpoint = start_checkpoint;
  for (const std::string& id : plan) {
    auto it = variants.find(id);
    if (it == variants.end() || it->second == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "plan names unknown variant " + id);
    }
    FineTuneResult r =
        trainer.FineTune(result.checkpoint, *it->second, ForVariant(hyperparams, *it->second), mode);
    result.checkpoint = r.checkpoint;
    result.seconds += r.seconds;
  }
  result.metric = Evaluate(trainer, result.checkpoint, test, mode);
  return result;
}

TrainingSetVariant ConcatAugmented(const std::vector<const TrainingSetVariant*>& variants,
                                   std::string id) {
  if (variants.empty()) throw Error(ErrorCode::kNoImprovingSets, "nothing to concatenate");
  TrainingSetVariant out;
  out.id = std::move(id);
  out.method = Method::kAugmentationConcat;
  for (const TrainingSetVariant* v : variants) {
    if (!out.backend.empty()) out.backend += "+";
    out.backend += v->id;
    out.labels.insert(out.labels.end(), v->labels.begin(), v->labels.end());
  }
  return out;
}

std::vector<CostRow> CostBenefit(const ScoreLedger& ledger) {
  const LedgerRow* base = ledger.baseline();
  if (base == nullptr || !base->metric || *base->metric <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "cost-benefit needs a positive baseline metric");
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<const LedgerRow*>> by_family;
  for (const LedgerRow& row : ledger.rows()) {
    if (by_family[row.method].empty()) order.push_back(row.method);
    by_family[row.method].push_back(&row);
  }

  std::vector<CostRow> out;
  for (const std::string& family : order) {
    CostRow c;
    c.family = family;
    double ft = 0.0;
    double gen = 0.0;
    for (const LedgerRow* row : by_family[family]) {
      ft += row->ft_seconds;
      gen += row->gen_seconds;
      if (row->metric && (!c.best_metric || *row->metric > *c.best_metric)) {
        c.best_metric = row->metric;
      }
    }
    c.hours = Round1(ft / 3600.0);
    c.gen_hours = Round1(gen / 3600.0);
    c.stage_only = family == kFamilyContinual || family == kFamilyAugmentation;
    if (family == kFamilyBaseline) {
      c.outcome = Outcome::kBaseline;
    } else if (!c.best_metric) {
      bool all_na = std::all_of(by_family[family].begin(), by_family[family].end(),
                                [](const LedgerRow* r) { return r->outcome == Outcome::kNotApplicable; });
      c.outcome = all_na ? Outcome::kNotApplicable : Outcome::kFailed;
    } else {
      c.relative_percent = RelativeChangePercent(*base->metric, *c.best_metric);
      long long delta = std::llround(*c.best_metric * 10.0) - std::llround(*base->metric * 10.0);
      c.outcome = delta > 0 ? Outcome::kImproved : delta < 0 ? Outcome::kWorse : Outcome::kEqual;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace mrcdata

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
#include <chrono>
#include <cstdio>
#include <ctime>

#include "mrcdata/annosvc.h"
#include "mrcdata/error.h"
#include "mrcdata/io.h"
#include "mrcdata/text.h"

namespace mrcdata {

using json = nlohmann::json;

std::string_view RevisionReasonName(RevisionReason reason) {
  switch (reason) {
    case RevisionReason::kNotSubstring:
      return "not_substring";
    case RevisionReason::kEmpty:
      return "empty";
    case RevisionReason::kLongerThanOriginal:
      return "longer_than_original";
  }
  return "unknown";
}

std::optional<RevisionReason> ValidateRevision(const ReviewTask& task, std::string_view answer) {
  std::string shortened = text::Normalize(answer);
  if (shortened.empty()) return RevisionReason::kEmpty;
  if (text::Normalize(task.context).find(shortened) == std::string::npos) {
    return RevisionReason::kNotSubstring;
  }
  if (text::WordCount(shortened) > task.original_words()) {
    return RevisionReason::kLongerThanOriginal;
  }
  return std::nullopt;
}

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kCreated:
      return "created";
    case EventKind::kRevised:
      return "revised";
    case EventKind::kSkipped:
      return "skipped";
    case EventKind::kReopened:
      return "reopened";
  }
  return "unknown";
}

std::optional<EventKind> ParseEventKind(std::string_view name) {
  if (name == "created") return EventKind::kCreated;
  if (name == "revised") return EventKind::kRevised;
  if (name == "skipped") return EventKind::kSkipped;
  if (name == "reopened") return EventKind::kReopened;
  return std::nullopt;
}

nlohmann::ordered_json EventToJson(const AnnotationEvent& event) {
  nlohmann::ordered_json j;
  j["seq"] = event.seq;
  j["task_id"] = event.task_id;
  j["kind"] = EventKindName(event.kind);
  j["payload"] = event.payload;
  j["ts"] = event.ts;
  return j;
}

AnnotationEvent EventFromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "event is not an object");
  AnnotationEvent e;
  try {
    e.seq = j.at("seq").get<int64_t>();
    e.task_id = j.at("task_id").get<std::string>();
    auto kind = ParseEventKind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::kParse, "unknown event kind");
    e.kind = *kind;
    e.payload = j.value("payload", json::object());
    e.ts = j.at("ts").get<std::string>();
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kParse, std::string("malformed event: ") + ex.what());
  }
  return e;
}

nlohmann::ordered_json TaskToJson(const ReviewTask& task) {
  nlohmann::ordered_json j;
  j["id"] = task.id;
  j["label_id"] = task.label_id;
  j["question"] = task.question;
  j["original_answer"] = task.original_answer;
  j["context"] = task.context;
  j["status"] = TaskStatusName(task.status);
  j["revised_answer"] = task.revised_answer ? json(*task.revised_answer) : json(nullptr);
  j["updated_at"] = task.updated_at;
  j["original_words"] = task.original_words();
  return j;
}

namespace {

[[noreturn]] void Reject(const AnnotationEvent& e, const std::string& why) {
  throw Error(ErrorCode::kParse,
              "event " + std::to_string(e.seq) + " (" + std::string(EventKindName(e.kind)) +
                  " " + e.task_id + "): " + why);
}

}  // namespace

void ApplyEvent(StoreState& state, const AnnotationEvent& e) {
  if (e.seq <= state.last_seq) Reject(e, "sequence number is not increasing");
  auto it = state.tasks.find(e.task_id);
  if (e.kind == EventKind::kCreated) {
    if (it != state.tasks.end()) Reject(e, "task already exists");
    ReviewTask task;
    try {
      task.id = e.task_id;
      task.label_id = e.payload.at("label_id").get<std::string>();
      task.question = e.payload.at("question").get<std::string>();
      task.original_answer = e.payload.at("original_answer").get<std::string>();
      task.context = e.payload.at("context").get<std::string>();
    } catch (const json::exception& ex) {
      Reject(e, ex.what());
    }
    if (state.task_by_label.count(task.label_id) > 0) Reject(e, "label already queued");
    task.updated_at = e.ts;
    state.task_by_label[task.label_id] = task.id;
    state.tasks.emplace(task.id, std::move(task));
    state.last_seq = e.seq;
    return;
  }
  if (it == state.tasks.end()) Reject(e, "unknown task");
  ReviewTask& task = it->second;
  switch (e.kind) {
    case EventKind::kRevised: {
      if (task.status == TaskStatus::kRevised) Reject(e, "task already revised");
      if (!e.payload.contains("answer") || !e.payload["answer"].is_string()) {
        Reject(e, "missing answer");
      }
      std::string answer = e.payload["answer"].get<std::string>();
      if (auto reason = ValidateRevision(task, answer)) {
        Reject(e, "stored revision fails validation: " + std::string(RevisionReasonName(*reason)));
      }
      task.status = TaskStatus::kRevised;
      task.revised_answer = answer;
      break;
    }
    case EventKind::kSkipped:
      if (task.status != TaskStatus::kPending) Reject(e, "only pending tasks can be skipped");
      task.status = TaskStatus::kSkipped;
      break;
    case EventKind::kReopened:
      if (task.status == TaskStatus::kPending) Reject(e, "task is already pending");
      task.status = TaskStatus::kPending;
      task.revised_answer.reset();
      break;
    case EventKind::kCreated:
      break;
  }
  task.updated_at = e.ts;
  state.last_seq = e.seq;
}

StoreState Replay(const std::vector<AnnotationEvent>& events) {
  StoreState state;
  for (const AnnotationEvent& e : events) ApplyEvent(state, e);
  return state;
}

std::vector<AnnotationEvent> ReadEventLog(const std::filesystem::path& path) {
  std::vector<AnnotationEvent> events;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": invalid JSON");
    }
    events.push_back(EventFromJson(j));
  }
  return events;
}

nlohmann::ordered_json StatsToJson(const AnnotationStats& s) {
  nlohmann::ordered_json j;
  j["total"] = s.total;
  j["pending"] = s.pending;
  j["revised"] = s.revised;
  j["skipped"] = s.skipped;
  j["mean_len_before"] = s.mean_len_before ? json(*s.mean_len_before) : json(nullptr);
  j["mean_len_after"] = s.mean_len_after ? json(*s.mean_len_after) : json(nullptr);
  return j;
}

std::string UtcNow() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() %
            1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

bool ReviewOrder(const ReviewTask& a, const ReviewTask& b) {
  int wa = a.original_words();
  int wb = b.original_words();
  if (wa != wb) return wa > wb;
  if (a.label_id != b.label_id) return a.label_id < b.label_id;
  return a.id < b.id;
}

AnnotationStore::AnnotationStore(std::filesystem::path log_path, Clock clock)
    : log_path_(std::move(log_path)), clock_(std::move(clock)) {
  auto state = std::make_shared<StoreState>();
  if (!log_path_.empty()) {
    if (std::filesystem::exists(log_path_)) {
      events_ = ReadEventLog(log_path_);
      *state = Replay(events_);
    } else if (log_path_.has_parent_path()) {
      std::filesystem::create_directories(log_path_.parent_path());
    }
    log_.open(log_path_, std::ios::app);
    if (!log_) throw Error(ErrorCode::kIo, "cannot open " + log_path_.string() + " for append");
  }
  state_ = std::move(state);
}

std::shared_ptr<const StoreState> AnnotationStore::Snapshot() const {
  std::lock_guard<std::mutex> lock(snapshot_mu_);
  return state_;
}

std::vector<AnnotationEvent> AnnotationStore::Events() const {
  std::lock_guard<std::mutex> lock(write_mu_);
  return events_;
}

AnnotationEvent AnnotationStore::Append(std::shared_ptr<StoreState>& next,
                                        const std::string& task_id, EventKind kind,
                                        json payload) {
  AnnotationEvent e;
  e.seq = next->last_seq + 1;
  e.task_id = task_id;
  e.kind = kind;
  e.payload = std::move(payload);
  e.ts = clock_();
  ApplyEvent(*next, e);
  if (log_.is_open()) {
    log_ << EventToJson(e).dump() << '\n';
    log_.flush();
    if (!log_) throw Error(ErrorCode::kIo, "failed to append to " + log_path_.string());
  }
  events_.push_back(e);
  return e;
}

void AnnotationStore::Publish(std::shared_ptr<StoreState> next) {
  std::lock_guard<std::mutex> lock(snapshot_mu_);
  state_ = std::move(next);
}

int AnnotationStore::Enqueue(const std::vector<ReviewTask>& tasks) {
  std::lock_guard<std::mutex> lock(write_mu_);
  auto next = std::make_shared<StoreState>(*Snapshot());
  int created = 0;
  for (const ReviewTask& t : tasks) {
    if (next->task_by_label.count(t.label_id) > 0 || next->tasks.count(t.id) > 0) continue;
    json payload = {{"label_id", t.label_id},
                    {"question", t.question},
                    {"original_answer", t.original_answer},
                    {"context", t.context}};
    Append(next, t.id, EventKind::kCreated, std::move(payload));
    ++created;
  }
  if (created > 0) Publish(std::move(next));
  return created;
}

int AnnotationStore::EnqueueLongAnswers(const std::vector<QALabel>& labels, int threshold_words) {
  return Enqueue(FlagLongAnswers(labels, threshold_words));
}

StoreResult AnnotationStore::SubmitRevision(const std::string& task_id, const std::string& answer) {
  std::lock_guard<std::mutex> lock(write_mu_);
  auto current = Snapshot();
  auto it = current->tasks.find(task_id);
  if (it == current->tasks.end()) {
    return {StoreStatus::kNotFound, std::nullopt, std::nullopt, "unknown task " + task_id};
  }
  if (it->second.status == TaskStatus::kRevised) {
    return {StoreStatus::kConflict, it->second, std::nullopt, "task already revised"};
  }
  if (auto reason = ValidateRevision(it->second, answer)) {
    return {StoreStatus::kUnprocessable, it->second, reason,
            std::string(RevisionReasonName(*reason))};
  }
  auto next = std::make_shared<StoreState>(*current);
  Append(next, task_id, EventKind::kRevised, json{{"answer", answer}});
  ReviewTask updated = next->tasks.at(task_id);
  Publish(std::move(next));
  return {StoreStatus::kOk, std::move(updated), std::nullopt, ""};
}

StoreResult AnnotationStore::Skip(const std::string& task_id) {
  std::lock_guard<std::mutex> lock(write_mu_);
  auto current = Snapshot();
  auto it = current->tasks.find(task_id);
  if (it == current->tasks.end()) {
    return {StoreStatus::kNotFound, std::nullopt, std::nullopt, "unknown task " + task_id};
  }
  if (it->second.status != TaskStatus::kPending) {
    return {StoreStatus::kConflict, it->second, std::nullopt,
            "task is " + std::string(TaskStatusName(it->second.status))};
  }
  auto next = std::make_shared<StoreState>(*current);
  Append(next, task_id, EventKind::kSkipped, json::object());
  ReviewTask updated = next->tasks.at(task_id);
  Publish(std::move(next));
  return {StoreStatus::kOk, std::move(updated), std::nullopt, ""};
}

StoreResult AnnotationStore::Reopen(const std::string& task_id) {
  std::lock_guard<std::mutex> lock(write_mu_);
  auto current = Snapshot();
  auto it = current->tasks.find(task_id);
  if (it == current->tasks.end()) {
    return {StoreStatus::kNotFound, std::nullopt, std::nullopt, "unknown task " + task_id};
  }
  if (it->second.status == TaskStatus::kPending) {
    return {StoreStatus::kConflict, it->second, std::nullopt, "task is already pending"};
  }
  auto next = std::make_shared<StoreState>(*current);
  Append(next, task_id, EventKind::kReopened,
         json{{"from", std::string(TaskStatusName(it->second.status))}});
  ReviewTask updated = next->tasks.at(task_id);
  Publish(std::move(next));
  return {StoreStatus::kOk, std::move(updated), std::nullopt, ""};
}

std::optional<ReviewTask> AnnotationStore::Next() const {
  auto state = Snapshot();
  const ReviewTask* best = nullptr;
  for (const auto& [id, task] : state->tasks) {
    if (task.status != TaskStatus::kPending) continue;
    if (best == nullptr || ReviewOrder(task, *best)) best = &task;
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::vector<ReviewTask> AnnotationStore::List(std::optional<TaskStatus> status,
                                              std::optional<int> limit) const {
  auto state = Snapshot();
  std::vector<ReviewTask> out;
  for (const auto& [id, task] : state->tasks) {
    if (!status || task.status == *status) out.push_back(task);
  }
  std::sort(out.begin(), out.end(), ReviewOrder);
  if (limit && *limit >= 0 && static_cast<size_t>(*limit) < out.size()) out.resize(*limit);
  return out;
}

AnnotationStats AnnotationStore::Stats() const {
  auto state = Snapshot();
  AnnotationStats s;
  double before = 0.0;
  double after = 0.0;
  for (const auto& [id, task] : state->tasks) {
    ++s.total;
    switch (task.status) {
      case TaskStatus::kPending:
        ++s.pending;
        break;
      case TaskStatus::kRevised:
        ++s.revised;
        break;
      case TaskStatus::kSkipped:
        ++s.skipped;
        break;
    }
    int words = task.original_words();
    before += words;
    after += task.revised_answer ? text::WordCount(*task.revised_answer) : words;
  }
  if (s.total > 0) {
    s.mean_len_before = before / s.total;
    s.mean_len_after = after / s.total;
  }
  return s;
}

std::vector<QALabel> AnnotationStore::ExportRevised(const std::vector<QALabel>& labels) const {
  auto state = Snapshot();
  std::vector<QALabel> out = labels;
  for (QALabel& label : out) {
    auto by_label = state->task_by_label.find(label.id);
    if (by_label == state->task_by_label.end()) continue;
    const ReviewTask& task = state->tasks.at(by_label->second);
    if (!task.revised_answer) continue;
    if (label.answers.empty()) {
      label.answers.push_back(*task.revised_answer);
    } else {
      label.answers.front() = *task.revised_answer;
    }
  }
  return out;
}

}  // namespace mrcdata

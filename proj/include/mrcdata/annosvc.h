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

#ifndef MRCDATA_ANNOSVC_H_
#define MRCDATA_ANNOSVC_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mrcdata/corpus.h"
#include "mrcdata/review_task.h"

namespace mrcdata {

enum class RevisionReason { kNotSubstring, kEmpty, kLongerThanOriginal };

std::string_view RevisionReasonName(RevisionReason reason);

// Mechanical checks only; whether a shorter span is "better" is the
// annotator's call.
std::optional<RevisionReason> ValidateRevision(const ReviewTask& task, std::string_view answer);

enum class EventKind { kCreated, kRevised, kSkipped, kReopened };

std::string_view EventKindName(EventKind kind);
std::optional<EventKind> ParseEventKind(std::string_view name);

struct AnnotationEvent {
  int64_t seq = 0;
  std::string task_id;
  EventKind kind = EventKind::kCreated;
  nlohmann::json payload = nlohmann::json::object();
  std::string ts;

  bool operator==(const AnnotationEvent&) const = default;
};

nlohmann::ordered_json EventToJson(const AnnotationEvent& event);
AnnotationEvent EventFromJson(const nlohmann::json& j);

nlohmann::ordered_json TaskToJson(const ReviewTask& task);

struct StoreState {
  std::map<std::string, ReviewTask> tasks;
  std::map<std::string, std::string> task_by_label;
  int64_t last_seq = 0;

  bool operator==(const StoreState&) const = default;
};

// Applies one event; throws Error(kParse) if it is not a legal transition
// or carries a revision that fails validation.
void ApplyEvent(StoreState& state, const AnnotationEvent& event);
StoreState Replay(const std::vector<AnnotationEvent>& events);
std::vector<AnnotationEvent> ReadEventLog(const std::filesystem::path& path);

enum class StoreStatus { kOk, kNotFound, kConflict, kUnprocessable };

struct StoreResult {
  StoreStatus status = StoreStatus::kOk;
  std::optional<ReviewTask> task;
  std::optional<RevisionReason> reason;
  std::string message;
};

struct AnnotationStats {
  int total = 0;
  int pending = 0;
  int revised = 0;
  int skipped = 0;
  std::optional<double> mean_len_before;
  std::optional<double> mean_len_after;
};

nlohmann::ordered_json StatsToJson(const AnnotationStats& stats);

using Clock = std::function<std::string()>;

// ISO-8601 UTC wall clock with millisecond precision.
std::string UtcNow();

// Longest original answer first, ties by label_id.
bool ReviewOrder(const ReviewTask& a, const ReviewTask& b);

class AnnotationStore {
 public:
  // An empty log path keeps the log in memory only. An existing log is
  // replayed before the store accepts writes.
  explicit AnnotationStore(std::filesystem::path log_path = {}, Clock clock = UtcNow);

  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  // Returns the number of newly created tasks; label_ids already queued are
  // left alone.
  int Enqueue(const std::vector<ReviewTask>& tasks);
  int EnqueueLongAnswers(const std::vector<QALabel>& labels, int threshold_words);

  StoreResult SubmitRevision(const std::string& task_id, const std::string& answer);
  StoreResult Skip(const std::string& task_id);
  // Sends a revised or skipped task back to pending.
  StoreResult Reopen(const std::string& task_id);

  std::optional<ReviewTask> Next() const;
  std::vector<ReviewTask> List(std::optional<TaskStatus> status = std::nullopt,
                               std::optional<int> limit = std::nullopt) const;
  AnnotationStats Stats() const;

  // Unrevised labels pass through untouched; revised ones get answers[0]
  // replaced by the revision.
  std::vector<QALabel> ExportRevised(const std::vector<QALabel>& labels) const;

  std::shared_ptr<const StoreState> Snapshot() const;
  std::vector<AnnotationEvent> Events() const;

 private:
  AnnotationEvent Append(std::shared_ptr<StoreState>& next, const std::string& task_id,
                         EventKind kind, nlohmann::json payload);
  void Publish(std::shared_ptr<StoreState> next);

  std::filesystem::path log_path_;
  Clock clock_;
  mutable std::mutex write_mu_;
  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const StoreState> state_;
  std::vector<AnnotationEvent> events_;
  std::ofstream log_;
};

struct ServerOptions {
  // When set, every request must carry it in the X-Annotation-Token header.
  std::string token;
};

class AnnotationServer {
 public:
  AnnotationServer(AnnotationStore& store, std::vector<QALabel> labels,
                   ServerOptions options = {});
  ~AnnotationServer();

  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // Returns the bound port, or -1.
  int Bind(const std::string& host, int port = 0);
  // Blocks until Stop().
  bool Serve();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mrcdata

#endif  // MRCDATA_ANNOSVC_H_

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

#ifndef MRCDATA_REVIEW_TASK_H_
#define MRCDATA_REVIEW_TASK_H_

#include <optional>
#include <string>
#include <string_view>

namespace mrcdata {

enum class TaskStatus { kPending, kRevised, kSkipped };

std::string_view TaskStatusName(TaskStatus status);
std::optional<TaskStatus> ParseTaskStatus(std::string_view name);

// One answer-shortening item. `revised_answer` is set iff status is kRevised.
struct ReviewTask {
  std::string id;
  std::string label_id;
  std::string question;
  std::string original_answer;
  std::string context;
  TaskStatus status = TaskStatus::kPending;
  std::optional<std::string> revised_answer;
  std::string updated_at;  // ISO-8601, UTC

  int original_words() const;

  bool operator==(const ReviewTask&) const = default;
};

}  // namespace mrcdata

#endif  // MRCDATA_REVIEW_TASK_H_

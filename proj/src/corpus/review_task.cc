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

#include "mrcdata/review_task.h"

#include "mrcdata/text.h"

namespace mrcdata {

std::string_view TaskStatusName(TaskStatus status) {
  switch (status) {
    case TaskStatus::kPending:
      return "pending";
    case TaskStatus::kRevised:
      return "revised";
    case TaskStatus::kSkipped:
      return "skipped";
  }
  return "unknown";
}

std::optional<TaskStatus> ParseTaskStatus(std::string_view name) {
  if (name == "pending") return TaskStatus::kPending;
  if (name == "revised") return TaskStatus::kRevised;
  if (name == "skipped") return TaskStatus::kSkipped;
  return std::nullopt;
}

int ReviewTask::original_words() const { return text::WordCount(original_answer); }

}  // namespace mrcdata

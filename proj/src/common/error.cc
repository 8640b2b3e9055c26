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

#include "mrcdata/error.h"

namespace mrcdata {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kLengthMismatch:
      return "length_mismatch";
    case ErrorCode::kTooFewLabels:
      return "too_few_labels";
    case ErrorCode::kInsufficientNegatives:
      return "insufficient_negatives";
    case ErrorCode::kNoImprovingSets:
      return "no_improving_sets";
    case ErrorCode::kEmptyInput:
      return "empty_input";
    case ErrorCode::kParse:
      return "parse_error";
    case ErrorCode::kIo:
      return "io_error";
  }
  return "unknown";
}

}  // namespace mrcdata

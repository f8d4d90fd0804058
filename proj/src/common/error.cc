// Copyright 2026 The predfuzz Authors
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

#include "common/error.h"

namespace predfuzz {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEntryNotFound: return "EntryNotFound";
    case ErrorCode::kBlockNotFound: return "BlockNotFound";
    case ErrorCode::kInvalidRange: return "InvalidRange";
    case ErrorCode::kInvalidWeights: return "InvalidWeights";
    case ErrorCode::kUnknownKnob: return "UnknownKnob";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kTargetNotFound: return "TargetNotFound";
    case ErrorCode::kDuplicatePredicate: return "DuplicatePredicate";
    case ErrorCode::kEntryCorrupt: return "EntryCorrupt";
    case ErrorCode::kRefinerTimeout: return "RefinerTimeout";
    case ErrorCode::kRefinerInvalid: return "RefinerInvalid";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kBaselineNotFound: return "BaselineNotFound";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace predfuzz

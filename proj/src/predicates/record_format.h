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

#ifndef PREDFUZZ_PREDICATES_RECORD_FORMAT_H_
#define PREDFUZZ_PREDICATES_RECORD_FORMAT_H_

#include <string>
#include <string_view>
#include <vector>

#include "cfg/cfg.h"
#include "predicates/predicate_runtime.h"

namespace predfuzz {

// Static and dynamic predicate records in their file layout. Each record is
// a JSON object with two-space indentation and one line per branch; the
// last value on each branch line is padded so the closing braces align.
//
//   {
//     "class": "...TypeChecker",
//     "method": "analyzePlus",
//     "line": 206,
//     "branches": [
//       { "line": 207, "dominance": 10 },
//       { "line": 208, "dominance": 40 }
//     ]
//   }
//
// Record files are JSON arrays of such objects, one per element.

std::string FormatStaticRecord(const StaticPredicateRecord& record, int indent = 0);
std::string FormatStaticRecords(const std::vector<StaticPredicateRecord>& records);

std::string FormatDynamicRecord(const DynamicPredicateRecord& record, int indent = 0);
std::string FormatDynamicReport(const DynamicPredicateReport& report);

// Accepts a single record object or an array. Score is recomputed as the
// maximum branch dominance. Throws kParseError.
std::vector<StaticPredicateRecord> ParseStaticRecords(std::string_view text);

// predicateId is not part of the file format; parsed records get
// "<class>.<method>:<predicateLine>". Throws kParseError.
std::vector<DynamicPredicateRecord> ParseDynamicRecords(std::string_view text);

}  // namespace predfuzz

#endif  // PREDFUZZ_PREDICATES_RECORD_FORMAT_H_

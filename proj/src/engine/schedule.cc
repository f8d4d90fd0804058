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

#include <algorithm>

#include "common/error.h"
#include "engine/engine.h"

namespace predfuzz {

void CoverageMap::Insert(BranchId id) {
  if (id >= bits_.size()) bits_.resize(id + 1, 0);
  if (!bits_[id]) {
    bits_[id] = 1;
    ++count_;
  }
}

std::vector<BranchId> CoverageMap::ids() const {
  std::vector<BranchId> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(static_cast<BranchId>(i));
  }
  return out;
}

bool ShouldSave(const CoverageMap& map, std::span<const BranchId> run) {
  return std::any_of(run.begin(), run.end(), [&](BranchId id) { return !map.contains(id); });
}

std::size_t Scheduler::SelectSeed(std::vector<CorpusEntry>& corpus) {
  if (corpus.empty()) throw Error(ErrorCode::kInvalidArgument, "empty corpus");
  if (!started_) {
    started_ = true;
    cursor_ = 0;
    remaining_ = corpus[0].favored ? multiplier_ : 1;
  } else if (remaining_ == 0) {
    if (++cursor_ >= corpus.size()) {
      cursor_ = 0;
      ++cycles_;
    }
    remaining_ = corpus[cursor_].favored ? multiplier_ : 1;
  }
  --remaining_;
  ++corpus[cursor_].times_selected;
  return cursor_;
}

std::string_view FuzzModeName(FuzzMode mode) {
  return mode == FuzzMode::kGuided ? "guided" : "random";
}

FuzzMode ParseFuzzMode(std::string_view name) {
  if (name == "guided") return FuzzMode::kGuided;
  if (name == "random") return FuzzMode::kRandom;
  throw Error(ErrorCode::kInvalidArgument, "unknown mode " + std::string(name));
}

}  // namespace predfuzz

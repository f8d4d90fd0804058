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

#include "predicates/predicate_runtime.h"

#include <algorithm>
#include <set>

#include "common/error.h"

namespace predfuzz {

BranchTable::BranchTable(std::vector<PredicateMeta> metas) : metas_(std::move(metas)) {
  for (std::size_t p = 0; p < metas_.size(); ++p) {
    const auto& m = metas_[p];
    if (!by_id_.emplace(m.predicate_id, p).second) {
      throw Error(ErrorCode::kDuplicatePredicate, m.predicate_id);
    }
    std::set<int> lines(m.branch_lines.begin(), m.branch_lines.end());
    if (m.branch_lines.size() < 2 || lines.size() != m.branch_lines.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  m.predicate_id + " needs at least two distinct branch lines");
    }
    offsets_.push_back(owner_.size());
    owner_.insert(owner_.end(), m.branch_lines.size(), p);
  }
}

std::optional<std::size_t> BranchTable::FindPredicate(std::string_view predicate_id) const {
  auto it = by_id_.find(std::string(predicate_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<BranchId> BranchTable::Find(std::string_view predicate_id, int branch_line) const {
  auto p = FindPredicate(predicate_id);
  if (!p) return std::nullopt;
  const auto& lines = metas_[*p].branch_lines;
  auto it = std::find(lines.begin(), lines.end(), branch_line);
  if (it == lines.end()) return std::nullopt;
  return branch_id(*p, static_cast<std::size_t>(it - lines.begin()));
}

void RecordBranch(ExecutionTrace& trace, std::string_view predicate_id, int branch_line) {
  if (auto id = trace.table().Find(predicate_id, branch_line)) trace.Hit(*id);
}

PredicateRegistry::PredicateRegistry(std::string target_id, std::vector<PredicateMeta> metas)
    : target_id_(std::move(target_id)), metas_(std::move(metas)) {
  for (std::size_t p = 0; p < metas_.size(); ++p) {
    if (!by_id_.emplace(metas_[p].predicate_id, p).second) {
      throw Error(ErrorCode::kDuplicatePredicate, metas_[p].predicate_id);
    }
    branch_counts_.emplace_back(metas_[p].branch_lines.size(), 0);
  }
  predicate_counts_.assign(metas_.size(), 0);
}

PredicateRegistry RegisterPredicates(std::string target_id, std::vector<PredicateMeta> metas) {
  return PredicateRegistry(std::move(target_id), std::move(metas));
}

const std::vector<std::optional<PredicateRegistry::Slot>>& PredicateRegistry::SlotsFor(
    const BranchTable& table) {
  if (bound_table_ == &table) return slots_;
  slots_.assign(table.num_branches(), std::nullopt);
  for (BranchId id = 0; id < table.num_branches(); ++id) {
    auto [tp, tb] = table.Locate(id);
    const PredicateMeta& tm = table.meta(tp);
    auto it = by_id_.find(tm.predicate_id);
    if (it == by_id_.end()) continue;
    const auto& lines = metas_[it->second].branch_lines;
    auto line = std::find(lines.begin(), lines.end(), tm.branch_lines[tb]);
    if (line == lines.end()) continue;
    slots_[id] = Slot{it->second, static_cast<std::size_t>(line - lines.begin())};
  }
  bound_table_ = &table;
  return slots_;
}

void PredicateRegistry::CommitSavedInput(const ExecutionTrace& trace) {
  const auto& slots = SlotsFor(trace.table());
  ++total_saved_;
  // Trace hits are distinct branch ids, so each branch counts once; a
  // predicate counts once however many of its branches were taken.
  std::vector<std::size_t> reached;
  for (BranchId id : trace.hits()) {
    const auto& slot = slots[id];
    if (!slot) continue;
    ++branch_counts_[slot->predicate][slot->branch];
    if (std::find(reached.begin(), reached.end(), slot->predicate) == reached.end()) {
      reached.push_back(slot->predicate);
      ++predicate_counts_[slot->predicate];
    }
  }
}

DynamicPredicateReport PredicateRegistry::EmitReport() const {
  DynamicPredicateReport report;
  report.total_saved_inputs = total_saved_;
  for (std::size_t p = 0; p < metas_.size(); ++p) {
    report.records.push_back({metas_[p], predicate_counts_[p], branch_counts_[p]});
  }
  return report;
}

}  // namespace predfuzz

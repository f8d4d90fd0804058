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

#ifndef PREDFUZZ_PREDICATES_PREDICATE_RUNTIME_H_
#define PREDFUZZ_PREDICATES_PREDICATE_RUNTIME_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace predfuzz {

using BranchId = std::uint32_t;

struct PredicateMeta {
  std::string predicate_id;
  std::string source_class;
  std::string source_method;
  int predicate_line = 1;
  std::vector<int> branch_lines;
};

// The instrumented predicates of one target. Branch ids are dense:
// predicate i's branches occupy [offset(i), offset(i) + branch_lines.size()).
class BranchTable {
 public:
  // Throws kDuplicatePredicate on repeated ids and kInvalidArgument for
  // predicates with fewer than two (or repeated) branch lines.
  explicit BranchTable(std::vector<PredicateMeta> metas);

  std::size_t num_predicates() const { return metas_.size(); }
  std::size_t num_branches() const { return owner_.size(); }
  const std::vector<PredicateMeta>& metas() const { return metas_; }
  const PredicateMeta& meta(std::size_t predicate) const { return metas_[predicate]; }

  BranchId branch_id(std::size_t predicate, std::size_t branch) const {
    return static_cast<BranchId>(offsets_[predicate] + branch);
  }
  // (predicate index, branch index) for a branch id.
  std::pair<std::size_t, std::size_t> Locate(BranchId id) const {
    std::size_t p = owner_[id];
    return {p, id - offsets_[p]};
  }
  std::optional<std::size_t> FindPredicate(std::string_view predicate_id) const;
  std::optional<BranchId> Find(std::string_view predicate_id, int branch_line) const;

 private:
  std::vector<PredicateMeta> metas_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> owner_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// Per-execution buffer of the branches one input took. Distinct ids only;
// re-hitting a branch is a no-op.
class ExecutionTrace {
 public:
  explicit ExecutionTrace(const BranchTable& table)
      : table_(&table), seen_(table.num_branches(), 0) {}

  void Hit(BranchId id) {
    if (!seen_[id]) {
      seen_[id] = 1;
      hits_.push_back(id);
    }
  }
  void Reset() {
    for (BranchId id : hits_) seen_[id] = 0;
    hits_.clear();
  }
  bool contains(BranchId id) const { return seen_[id] != 0; }
  // Distinct branch ids in first-hit order.
  const std::vector<BranchId>& hits() const { return hits_; }
  const BranchTable& table() const { return *table_; }

 private:
  const BranchTable* table_;
  std::vector<std::uint8_t> seen_;
  std::vector<BranchId> hits_;
};

// Records that the running input took `branch_line` of `predicate_id`.
// Unknown predicates or lines are ignored.
void RecordBranch(ExecutionTrace& trace, std::string_view predicate_id, int branch_line);

struct DynamicPredicateRecord {
  PredicateMeta meta;
  std::uint64_t predicate_inputs = 0;
  std::vector<std::uint64_t> branch_inputs;  // parallel to meta.branch_lines
};

struct DynamicPredicateReport {
  std::vector<DynamicPredicateRecord> records;
  std::uint64_t total_saved_inputs = 0;
};

// Counts, per registered predicate and branch, the distinct saved inputs
// that reached it. Only committed traces contribute.
class PredicateRegistry {
 public:
  PredicateRegistry() = default;
  // Throws kDuplicatePredicate.
  PredicateRegistry(std::string target_id, std::vector<PredicateMeta> metas);

  const std::string& target_id() const { return target_id_; }
  std::size_t size() const { return metas_.size(); }

  void CommitSavedInput(const ExecutionTrace& trace);
  DynamicPredicateReport EmitReport() const;

 private:
  struct Slot {
    std::size_t predicate;
    std::size_t branch;
  };
  const std::vector<std::optional<Slot>>& SlotsFor(const BranchTable& table);

  std::string target_id_;
  std::vector<PredicateMeta> metas_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::uint64_t> predicate_counts_;
  std::vector<std::vector<std::uint64_t>> branch_counts_;
  std::uint64_t total_saved_ = 0;
  const BranchTable* bound_table_ = nullptr;
  std::vector<std::optional<Slot>> slots_;
};

PredicateRegistry RegisterPredicates(std::string target_id, std::vector<PredicateMeta> metas);

}  // namespace predfuzz

#endif  // PREDFUZZ_PREDICATES_PREDICATE_RUNTIME_H_

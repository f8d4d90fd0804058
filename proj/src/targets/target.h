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

#ifndef PREDFUZZ_TARGETS_TARGET_H_
#define PREDFUZZ_TARGETS_TARGET_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfg/cfg.h"
#include "predicates/predicate_runtime.h"

namespace predfuzz {

enum class RunStatus { kOk, kRejected, kError };

std::string_view RunStatusName(RunStatus status);

struct RunOutcome {
  RunStatus status = RunStatus::kOk;
  std::string reason;                  // phase or check that failed
  std::vector<BranchId> branches_hit;  // filled by RunTarget
};

// A generator change the scripted refiner may apply when the named branch is
// underserved: switch the toggles on, and/or multiply one weight.
struct RefineHint {
  std::string predicate_id;
  int branch_line = 0;
  std::vector<std::string> enable_toggles;
  std::string weight;
  double factor = 1.0;
};

struct TargetBinding {
  std::string target_id;
  // Runs one input, reporting branches through the trace. Must terminate
  // for any input.
  std::function<RunOutcome(std::span<const std::uint8_t>, ExecutionTrace&)> run;
  const BranchTable* branches = nullptr;
  std::string_view cfg_description;
  std::vector<std::string> source_files;  // embedded paths, see EmbeddedTargetFile
  std::string entry_point;
  std::vector<RefineHint> refine_hints;

  const std::vector<PredicateMeta>& predicate_metas() const { return branches->metas(); }
};

// Built-in targets: "minilang", "json", "bzh". Throws kTargetNotFound.
const TargetBinding& FindTarget(std::string_view target_id);
std::vector<std::string> TargetIds();

// Runs with a fresh trace and copies the hit set into the outcome.
RunOutcome RunTarget(const TargetBinding& target, std::span<const std::uint8_t> input);
// Reuses `trace`, which is reset first and holds the run's hits afterwards.
RunOutcome RunTarget(const TargetBinding& target, std::span<const std::uint8_t> input,
                     ExecutionTrace& trace);
// Process-wide count of RunTarget calls on `target_id`.
std::uint64_t TargetInvocations(std::string_view target_id);

// Parsed and built CFG of a target. Throws kTargetNotFound.
CfgDescription TargetCfgDescription(std::string_view target_id);
SupergraphBuild TargetCfg(std::string_view target_id);

// Instrumentation helper: sites are predicate indices in the target's
// BranchTable; two-way sites list the taken line first.
class Probe {
 public:
  explicit Probe(ExecutionTrace& trace) : trace_(trace) {}

  bool Cond(int site, bool value) {
    trace_.Hit(trace_.table().branch_id(static_cast<std::size_t>(site), value ? 0 : 1));
    return value;
  }
  void Take(int site, std::size_t branch) {
    trace_.Hit(trace_.table().branch_id(static_cast<std::size_t>(site), branch));
  }

 private:
  ExecutionTrace& trace_;
};

PredicateMeta Site(std::string_view source_class, std::string_view method, int line,
                   std::vector<int> branch_lines);

namespace targets_internal {
const TargetBinding& BzhTarget();
const TargetBinding& JsonTarget();
const TargetBinding& MinilangTarget();
}  // namespace targets_internal

}  // namespace predfuzz

#endif  // PREDFUZZ_TARGETS_TARGET_H_

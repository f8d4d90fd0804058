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

#include "targets/target.h"

#include <atomic>

#include "common/error.h"

namespace predfuzz {

std::string_view RunStatusName(RunStatus status) {
  switch (status) {
    case RunStatus::kOk: return "ok";
    case RunStatus::kRejected: return "rejected";
    case RunStatus::kError: return "error";
  }
  return "error";
}

PredicateMeta Site(std::string_view source_class, std::string_view method, int line,
                   std::vector<int> branch_lines) {
  PredicateMeta m;
  m.source_class = source_class;
  m.source_method = method;
  m.predicate_line = line;
  m.predicate_id = m.source_class + "." + m.source_method + ":" + std::to_string(line);
  m.branch_lines = std::move(branch_lines);
  return m;
}

const TargetBinding& FindTarget(std::string_view target_id) {
  if (target_id == "bzh") return targets_internal::BzhTarget();
  if (target_id == "json") return targets_internal::JsonTarget();
  if (target_id == "minilang") return targets_internal::MinilangTarget();
  throw Error(ErrorCode::kTargetNotFound, std::string(target_id));
}

std::vector<std::string> TargetIds() { return {"bzh", "json", "minilang"}; }

namespace {

std::atomic<std::uint64_t>& InvocationCounter(std::string_view target_id) {
  static std::atomic<std::uint64_t> counters[3];
  if (target_id == "bzh") return counters[0];
  if (target_id == "json") return counters[1];
  if (target_id == "minilang") return counters[2];
  throw Error(ErrorCode::kTargetNotFound, std::string(target_id));
}

}  // namespace

RunOutcome RunTarget(const TargetBinding& target, std::span<const std::uint8_t> input) {
  ExecutionTrace trace(*target.branches);
  return RunTarget(target, input, trace);
}

RunOutcome RunTarget(const TargetBinding& target, std::span<const std::uint8_t> input,
                     ExecutionTrace& trace) {
  InvocationCounter(target.target_id).fetch_add(1, std::memory_order_relaxed);
  trace.Reset();
  RunOutcome out = target.run(input, trace);
  out.branches_hit = trace.hits();
  return out;
}

std::uint64_t TargetInvocations(std::string_view target_id) {
  return InvocationCounter(target_id).load(std::memory_order_relaxed);
}

CfgDescription TargetCfgDescription(std::string_view target_id) {
  return ParseCfgDescription(FindTarget(target_id).cfg_description);
}

SupergraphBuild TargetCfg(std::string_view target_id) {
  return BuildSupergraph(TargetCfgDescription(target_id));
}

}  // namespace predfuzz

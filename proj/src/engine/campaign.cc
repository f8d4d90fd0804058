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
#include <chrono>
#include <random>

#include "common/error.h"
#include "engine/engine.h"
#include "targets/target.h"

namespace predfuzz {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void Validate(const CampaignOptions& o) {
  if (o.budget_execs == 0 && o.budget_secs <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "campaign needs an execution or time budget");
  }
  if (o.config.target_id != o.target_id) {
    throw Error(ErrorCode::kInvalidArgument,
                "config is for target " + o.config.target_id + ", not " + o.target_id);
  }
  if (o.max_input_size == 0) throw Error(ErrorCode::kInvalidArgument, "max input size must be positive");
  if (o.favored_multiplier < 1) throw Error(ErrorCode::kInvalidArgument, "favored multiplier must be >= 1");
  if (o.sample_every == 0) throw Error(ErrorCode::kInvalidArgument, "sample interval must be positive");
}

class Campaign {
 public:
  explicit Campaign(const CampaignOptions& options)
      : o_(options),
        target_(FindTarget(options.target_id)),
        generator_(options.config),
        rng_(options.rng_seed),
        trace_(*target_.branches),
        coverage_(target_.branches->num_branches()),
        registry_(target_.target_id, target_.branches->metas()),
        scheduler_(options.favored_multiplier) {}

  CampaignResult Run() {
    CampaignResult r;
    r.target_id = o_.target_id;
    r.profile_name = o_.config.profile_name;
    r.mode = o_.mode;
    r.rng_seed = o_.rng_seed;
    r.config_fingerprint = generator_.fingerprint();

    start_ = Clock::now();
    while (!BudgetSpent(r.executions)) {
      Step(r);
      if (r.executions % o_.sample_every == 0) Sample(r);
    }
    r.duration_secs = SecondsSince(start_);
    if (r.samples.empty() || r.samples.back().executions != r.executions) Sample(r);
    r.inputs_per_sec = r.duration_secs > 0 ? static_cast<double>(r.executions) / r.duration_secs : 0;
    r.corpus = std::move(corpus_);
    r.final_coverage = coverage_.ids();
    r.dynamic_report = registry_.EmitReport();
    return r;
  }

 private:
  bool BudgetSpent(std::uint64_t executions) const {
    if (o_.budget_execs > 0 && executions >= o_.budget_execs) return true;
    return o_.budget_secs > 0 && SecondsSince(start_) >= o_.budget_secs;
  }

  void Sample(CampaignResult& r) {
    r.samples.push_back({r.executions, SecondsSince(start_), coverage_.size()});
  }

  CorpusEntry FreshStream() {
    CorpusEntry e;
    const std::size_t len = kMinFreshStream + rng_() % (kMaxFreshStream - kMinFreshStream + 1);
    e.stream_bytes.resize(len);
    for (auto& b : e.stream_bytes) b = static_cast<std::uint8_t>(rng_());
    e.overflow_seed = rng_();
    return e;
  }

  void Step(CampaignResult& r) {
    std::optional<std::size_t> parent;
    CorpusEntry child;
    if (o_.mode == FuzzMode::kRandom || corpus_.empty()) {
      child = FreshStream();
    } else {
      parent = scheduler_.SelectSeed(corpus_);
      RefreshFavored();
      const CorpusEntry& p = corpus_[*parent];
      ParamStream decisions(Bytes{}, rng_());
      child.stream_bytes = Mutate(p.stream_bytes, decisions, o_.max_input_size);
      child.overflow_seed = p.overflow_seed;
      ++r.mutate_calls;
    }

    ParamStream stream(child.stream_bytes, child.overflow_seed);
    const GeneratedInput input = generator_.Generate(stream);
    const RunOutcome outcome = RunTarget(target_, input.payload, trace_);
    ++r.executions;
    switch (outcome.status) {
      case RunStatus::kOk: ++r.status_ok; break;
      case RunStatus::kRejected: ++r.status_rejected; break;
      case RunStatus::kError: ++r.status_error; break;
    }

    const auto& hits = trace_.hits();
    if (!ShouldSave(coverage_, hits)) return;
    for (BranchId id : hits) {
      if (!coverage_.contains(id)) child.new_branches.push_back(id);
    }
    std::sort(child.new_branches.begin(), child.new_branches.end());
    for (BranchId id : child.new_branches) coverage_.Insert(id);
    child.payload_digest = Fnv1a64(input.payload);
    registry_.CommitSavedInput(trace_);
    corpus_.push_back(std::move(child));
    earned_.push_back(false);
    if (parent) {
      corpus_[*parent].favored = true;
      earned_[*parent] = true;
    }
  }

  // Favored status lasts for the cycle in which it was earned and the next.
  void RefreshFavored() {
    if (scheduler_.cycles() == seen_cycles_) return;
    seen_cycles_ = scheduler_.cycles();
    for (std::size_t i = 0; i < corpus_.size(); ++i) {
      corpus_[i].favored = earned_[i];
      earned_[i] = false;
    }
  }

  const CampaignOptions& o_;
  const TargetBinding& target_;
  Generator generator_;
  std::mt19937_64 rng_;
  ExecutionTrace trace_;
  CoverageMap coverage_;
  PredicateRegistry registry_;
  Scheduler scheduler_;
  std::vector<CorpusEntry> corpus_;
  std::vector<bool> earned_;
  std::uint64_t seen_cycles_ = 0;
  Clock::time_point start_;
};

}  // namespace

CampaignResult RunCampaign(const CampaignOptions& options) {
  FindTarget(options.target_id);
  Validate(options);
  return Campaign(options).Run();
}

ReplayResult ReplayCorpus(std::string_view target_id, const GeneratorConfig& config,
                          std::span<const CorpusEntry> corpus) {
  const TargetBinding& target = FindTarget(target_id);
  const Generator generator(config);
  ExecutionTrace trace(*target.branches);
  CoverageMap coverage(target.branches->num_branches());
  ReplayResult out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      ParamStream stream(corpus[i].stream_bytes, corpus[i].overflow_seed);
      GeneratedInput input = generator.Generate(stream);
      RunTarget(target, input.payload, trace);
      for (BranchId id : trace.hits()) coverage.Insert(id);
      out.inputs.push_back(std::move(input));
      out.entry_index.push_back(i);
    } catch (const std::exception& e) {
      out.errors.push_back("entry " + std::to_string(i) + ": " + e.what());
    }
  }
  out.coverage = coverage.ids();
  return out;
}

}  // namespace predfuzz

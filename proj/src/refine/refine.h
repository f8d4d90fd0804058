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

#ifndef PREDFUZZ_REFINE_REFINE_H_
#define PREDFUZZ_REFINE_REFINE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfg/cfg.h"
#include "engine/engine.h"
#include "gen/generator.h"
#include "predicates/predicate_runtime.h"

namespace predfuzz {

inline constexpr double kDefaultRefineThreshold = 0.05;
inline constexpr double kMaxRefinedWeight = 64.0;
inline constexpr std::size_t kRequestSampleInputs = 5;

// base: campaign statistics and sample inputs only. static: plus the ranked
// records from the target's CFG. llm: plus records from the refiner's
// identify_predicates answer.
enum class FeedbackMode { kBase, kStatic, kLlm };
std::string_view FeedbackModeName(FeedbackMode mode);
// Throws kInvalidArgument.
FeedbackMode ParseFeedbackMode(std::string_view name);

struct IterationCheckpoint {
  int iteration = 0;
  GeneratorConfig config_snapshot;
  CampaignResult campaign;
  double coverage_ratio_vs_iter1 = 1.0;
  bool failed = false;
  std::string failure;
};

struct RefineState {
  std::string target_id;
  GeneratorConfig config;
  int iteration = 1;  // the next iteration to run
  std::optional<std::vector<StaticPredicateRecord>> static_records;
  FeedbackMode feedback_mode = FeedbackMode::kBase;
  std::vector<IterationCheckpoint> checkpoints;
};

// Static mode loads the ranked records of the target's CFG.
RefineState MakeRefineState(const GeneratorConfig& config, FeedbackMode mode);

struct SessionBudget {
  std::uint64_t execs = 0;
  double secs = 0;
  std::uint64_t seed = 0;
  FuzzMode mode = FuzzMode::kGuided;
};

// cov_k / cov_1, with a zero baseline counted as 1 and 0/0 defined as 1.
double CoverageRatio(std::size_t cov_1, std::size_t cov_k);

// Runs one campaign with state.config and appends its checkpoint. A failing
// campaign yields a checkpoint with failed set and ratio 0.
const IterationCheckpoint& RunIteration(RefineState& state, const SessionBudget& budget);

// (iteration, ratio) per checkpoint. Throws kInvalidArgument when empty.
std::vector<std::pair<int, double>> CoverageSeries(const RefineState& state);

struct CampaignStats {
  std::uint64_t executions = 0;
  std::size_t final_coverage = 0;
  std::size_t total_branches = 0;
  std::size_t saved_inputs = 0;
  double inputs_per_sec = 0;
};

struct RefinerRequest {
  std::string target_id;
  int iteration = 0;
  FeedbackMode feedback_mode = FeedbackMode::kBase;
  GeneratorConfig config;
  CampaignStats campaign;
  std::vector<std::string> sample_inputs;  // decoded payloads
  std::optional<DynamicPredicateReport> dynamic_report;
  std::optional<std::vector<StaticPredicateRecord>> static_records;
};

struct RefinerResponse {
  std::optional<GeneratorConfig> config;
  std::optional<std::vector<StaticPredicateRecord>> records;
};

// JSON wire bodies. Parsers throw kRefinerInvalid.
std::string RefinerRequestToJson(const RefinerRequest& request);
RefinerRequest RefinerRequestFromJson(std::string_view text);
std::string RefinerResponseToJson(const RefinerResponse& response);
RefinerResponse RefinerResponseFromJson(std::string_view text);

// Picks the highest-ranked underserved branch that has a target hint which
// would change the config, and applies that hint. A branch is underserved
// when its count is 0 or below threshold * predicate count; zero-hit
// branches rank first, then static dominance when records are given, then
// report order. Weights are multiplied by the hint factor up to
// kMaxRefinedWeight, and a zero weight becomes 1. Returns the config
// unchanged when nothing qualifies.
GeneratorConfig ScriptedRefine(const GeneratorConfig& config, const DynamicPredicateReport& report,
                               const std::optional<std::vector<StaticPredicateRecord>>& static_records,
                               double threshold = kDefaultRefineThreshold);

using Refiner = std::function<RefinerResponse(const RefinerRequest&)>;

Refiner MakeScriptedRefiner(double threshold = kDefaultRefineThreshold);

// POSTs the JSON body to `endpoint` ("http://host:port/path"). Throws
// kRefinerTimeout on timeouts, kIo when the endpoint is unreachable or
// answers with a non-2xx status, kRefinerInvalid on malformed bodies.
std::string PostJson(std::string_view endpoint, const std::string& body,
                     std::chrono::milliseconds timeout);

Refiner MakeHttpRefiner(std::string endpoint, std::chrono::milliseconds timeout);

struct IdentifyResult {
  std::vector<StaticPredicateRecord> records;
  std::vector<std::string> warnings;
};

// Keeps the records whose (class, method, line) is a predicate of the
// target's CFG and whose branch lines are outcomes of it; the rest are
// dropped with a warning. Dominance values are kept as given.
IdentifyResult ValidateIdentifiedRecords(std::string_view target_id,
                                         std::vector<StaticPredicateRecord> records);

// Sends the target's sources and asks for ranked predicate records.
// Throws like PostJson.
IdentifyResult LlmIdentifyPredicates(std::string_view endpoint, std::string_view target_id,
                                     std::chrono::milliseconds timeout);

std::string IdentifyRequestToJson(std::string_view target_id);

// Outcome of asking the refiner once.
struct RefineStepResult {
  bool changed = false;
  bool error = false;
  std::string note;
};

// Builds the request for state.feedback_mode from the last checkpoint, asks
// the refiner and adopts a valid answer. Any refiner error or invalid config
// leaves state.config untouched.
RefineStepResult RefineStep(RefineState& state, const Refiner& refiner);

struct RefineLoopOptions {
  int max_iterations = 10;
  SessionBudget budget;
  std::optional<std::filesystem::path> checkpoint_dir;
};

struct RefineLoopResult {
  bool reached_fixpoint = false;
  int fixpoint_iteration = 0;  // iteration whose refinement left the config unchanged
  std::vector<RefineStepResult> steps;
};

// Alternates RunIteration and RefineStep until the refiner returns the same
// config or max_iterations campaigns have run. Checkpoints go to
// <dir>/iter_NNN/ when a directory is given.
RefineLoopResult RunRefineLoop(RefineState& state, const Refiner& refiner,
                               const RefineLoopOptions& options);

// Writes config.json, summary.json, timing.json, predicates.json and corpus/
// for one checkpoint, plus series.json for the state. Throws kIo.
void WriteCheckpoint(const RefineState& state, const IterationCheckpoint& checkpoint,
                     const std::filesystem::path& dir);
std::string CoverageSeriesJson(const RefineState& state);

}  // namespace predfuzz

#endif  // PREDFUZZ_REFINE_REFINE_H_

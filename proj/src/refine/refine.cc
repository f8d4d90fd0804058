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

#include "refine/refine.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include "common/error.h"
#include "common/file_util.h"
#include "targets/target.h"

namespace predfuzz {
namespace {

struct Candidate {
  const RefineHint* hint;
  bool zero_hit;
  std::size_t dominance;
  std::size_t order;
};

bool WouldChange(const GeneratorConfig& c, const RefineHint& hint) {
  for (const auto& t : hint.enable_toggles) {
    if (!c.toggle(t)) return true;
  }
  return !hint.weight.empty() && c.weight(hint.weight) < kMaxRefinedWeight;
}

GeneratorConfig Apply(GeneratorConfig c, const RefineHint& hint) {
  for (const auto& t : hint.enable_toggles) c.toggles[t] = true;
  if (!hint.weight.empty()) {
    const double w = c.weight(hint.weight);
    c.weights[hint.weight] = w > 0 ? std::min(kMaxRefinedWeight, w * hint.factor) : 1.0;
  }
  return c;
}

std::size_t StaticDominance(const std::vector<StaticPredicateRecord>& records,
                            const std::string& predicate_id, int branch_line) {
  for (const auto& r : records) {
    if (r.source_class + "." + r.source_method + ":" + std::to_string(r.line) != predicate_id) continue;
    for (const auto& b : r.branches) {
      if (b.line == branch_line) return b.dominance;
    }
  }
  return 0;
}

std::vector<std::string> SampleInputs(const IterationCheckpoint& cp) {
  std::vector<std::string> out;
  const auto& corpus = cp.campaign.corpus;
  if (corpus.empty()) return out;
  const std::size_t n = std::min(kRequestSampleInputs, corpus.size());
  std::vector<CorpusEntry> picked;
  for (std::size_t i = 0; i < n; ++i) picked.push_back(corpus[corpus.size() - 1 - i]);
  const auto replay = ReplayCorpus(cp.campaign.target_id, cp.config_snapshot, picked);
  for (const auto& in : replay.inputs) out.emplace_back(in.payload.begin(), in.payload.end());
  return out;
}

std::string IterDirName(int iteration) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "iter_%03d", iteration);
  return buf;
}

}  // namespace

std::string_view FeedbackModeName(FeedbackMode mode) {
  switch (mode) {
    case FeedbackMode::kBase: return "base";
    case FeedbackMode::kStatic: return "static";
    case FeedbackMode::kLlm: return "llm";
  }
  return "base";
}

FeedbackMode ParseFeedbackMode(std::string_view name) {
  if (name == "base") return FeedbackMode::kBase;
  if (name == "static") return FeedbackMode::kStatic;
  if (name == "llm") return FeedbackMode::kLlm;
  throw Error(ErrorCode::kInvalidArgument, "unknown feedback mode " + std::string(name));
}

RefineState MakeRefineState(const GeneratorConfig& config, FeedbackMode mode) {
  ValidateConfig(config);
  RefineState s;
  s.target_id = config.target_id;
  s.config = config;
  s.feedback_mode = mode;
  if (mode == FeedbackMode::kStatic) s.static_records = RankPredicates(TargetCfg(config.target_id).graph);
  return s;
}

double CoverageRatio(std::size_t cov_1, std::size_t cov_k) {
  if (cov_1 == 0) return cov_k == 0 ? 1.0 : static_cast<double>(cov_k);
  return static_cast<double>(cov_k) / static_cast<double>(cov_1);
}

const IterationCheckpoint& RunIteration(RefineState& state, const SessionBudget& budget) {
  if (state.feedback_mode == FeedbackMode::kStatic && !state.static_records) {
    throw Error(ErrorCode::kInvalidArgument, "static feedback needs static records");
  }
  IterationCheckpoint cp;
  cp.iteration = state.iteration;
  cp.config_snapshot = state.config;
  try {
    CampaignOptions o;
    o.target_id = state.target_id;
    o.config = state.config;
    o.mode = budget.mode;
    o.budget_execs = budget.execs;
    o.budget_secs = budget.secs;
    o.rng_seed = budget.seed;
    cp.campaign = RunCampaign(o);
    const std::size_t cov = cp.campaign.final_coverage.size();
    const auto first = std::find_if(state.checkpoints.begin(), state.checkpoints.end(),
                                    [](const IterationCheckpoint& c) { return !c.failed; });
    cp.coverage_ratio_vs_iter1 =
        first == state.checkpoints.end() ? 1.0 : CoverageRatio(first->campaign.final_coverage.size(), cov);
  } catch (const std::exception& e) {
    cp.failed = true;
    cp.failure = e.what();
    cp.coverage_ratio_vs_iter1 = 0;
  }
  state.checkpoints.push_back(std::move(cp));
  ++state.iteration;
  return state.checkpoints.back();
}

std::vector<std::pair<int, double>> CoverageSeries(const RefineState& state) {
  if (state.checkpoints.empty()) throw Error(ErrorCode::kInvalidArgument, "no checkpoints");
  std::vector<std::pair<int, double>> out;
  for (const auto& cp : state.checkpoints) out.emplace_back(cp.iteration, cp.coverage_ratio_vs_iter1);
  return out;
}

GeneratorConfig ScriptedRefine(const GeneratorConfig& config, const DynamicPredicateReport& report,
                               const std::optional<std::vector<StaticPredicateRecord>>& static_records,
                               double threshold) {
  const TargetBinding& target = FindTarget(config.target_id);
  std::vector<Candidate> candidates;
  std::size_t order = 0;
  for (const auto& rec : report.records) {
    for (std::size_t b = 0; b < rec.meta.branch_lines.size(); ++b, ++order) {
      const std::uint64_t hits = rec.branch_inputs[b];
      const bool zero = hits == 0;
      const bool skewed = rec.predicate_inputs > 0 &&
                          static_cast<double>(hits) < threshold * static_cast<double>(rec.predicate_inputs);
      if (!zero && !skewed) continue;
      const int line = rec.meta.branch_lines[b];
      for (const auto& hint : target.refine_hints) {
        if (hint.predicate_id != rec.meta.predicate_id || hint.branch_line != line) continue;
        if (!WouldChange(config, hint)) continue;
        const std::size_t dom =
            static_records ? StaticDominance(*static_records, rec.meta.predicate_id, line) : 0;
        candidates.push_back({&hint, zero, dom, order});
      }
    }
  }
  if (candidates.empty()) return config;
  const auto best = std::min_element(candidates.begin(), candidates.end(),
                                     [](const Candidate& a, const Candidate& b) {
                                       if (a.zero_hit != b.zero_hit) return a.zero_hit;
                                       if (a.dominance != b.dominance) return a.dominance > b.dominance;
                                       return a.order < b.order;
                                     });
  GeneratorConfig out = Apply(config, *best->hint);
  ValidateConfig(out);
  return out;
}

Refiner MakeScriptedRefiner(double threshold) {
  return [threshold](const RefinerRequest& req) {
    RefinerResponse resp;
    resp.config = req.dynamic_report
                      ? ScriptedRefine(req.config, *req.dynamic_report, req.static_records, threshold)
                      : req.config;
    return resp;
  };
}

RefineStepResult RefineStep(RefineState& state, const Refiner& refiner) {
  RefineStepResult out;
  if (state.checkpoints.empty()) throw Error(ErrorCode::kInvalidArgument, "no campaign to refine from");
  const IterationCheckpoint& cp = state.checkpoints.back();

  RefinerRequest req;
  req.target_id = state.target_id;
  req.iteration = cp.iteration;
  req.feedback_mode = state.feedback_mode;
  req.config = state.config;
  req.campaign = {cp.campaign.executions, cp.campaign.final_coverage.size(),
                  FindTarget(state.target_id).branches->num_branches(), cp.campaign.corpus.size(),
                  cp.campaign.inputs_per_sec};
  if (!cp.failed) req.sample_inputs = SampleInputs(cp);
  if (state.feedback_mode != FeedbackMode::kBase && !cp.failed) {
    req.dynamic_report = cp.campaign.dynamic_report;
    req.static_records = state.static_records;
  }

  try {
    RefinerResponse resp = refiner(req);
    if (!resp.config) throw Error(ErrorCode::kRefinerInvalid, "response carries no config");
    if (resp.config->target_id != state.target_id) {
      throw Error(ErrorCode::kRefinerInvalid, "response config is for target " + resp.config->target_id);
    }
    try {
      ValidateConfig(*resp.config);
    } catch (const Error& e) {
      throw Error(ErrorCode::kRefinerInvalid, e.what());
    }
    out.changed = !(*resp.config == state.config);
    state.config = std::move(*resp.config);
    out.note = out.changed ? "config updated" : "config unchanged";
  } catch (const std::exception& e) {
    out.error = true;
    out.note = e.what();
  }
  return out;
}

RefineLoopResult RunRefineLoop(RefineState& state, const Refiner& refiner,
                               const RefineLoopOptions& options) {
  if (options.max_iterations < 1) throw Error(ErrorCode::kInvalidArgument, "max iterations must be >= 1");
  RefineLoopResult out;
  for (int i = 0; i < options.max_iterations; ++i) {
    const IterationCheckpoint& cp = RunIteration(state, options.budget);
    RefineStepResult step = RefineStep(state, refiner);
    if (options.checkpoint_dir) WriteCheckpoint(state, cp, *options.checkpoint_dir);
    const bool fixpoint = !step.changed && !step.error;
    out.steps.push_back(std::move(step));
    if (fixpoint) {
      out.reached_fixpoint = true;
      out.fixpoint_iteration = cp.iteration;
      break;
    }
  }
  return out;
}

std::string CoverageSeriesJson(const RefineState& state) {
  std::string out = "[\n";
  const auto series = CoverageSeries(state);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& cp = state.checkpoints[i];
    char buf[160];
    std::snprintf(buf, sizeof buf, "  {\"iteration\": %d, \"coverage\": %zu, \"ratio\": %.6f, \"failed\": %s}%s\n",
                  series[i].first, cp.campaign.final_coverage.size(), series[i].second,
                  cp.failed ? "true" : "false", i + 1 < series.size() ? "," : "");
    out += buf;
  }
  return out + "]\n";
}

void WriteCheckpoint(const RefineState& state, const IterationCheckpoint& cp,
                     const std::filesystem::path& dir) {
  const auto iter_dir = dir / IterDirName(cp.iteration);
  EnsureDirectory(iter_dir);
  if (cp.failed) {
    WriteTextFile(iter_dir / "config.json", SaveConfig(cp.config_snapshot));
    WriteTextFile(iter_dir / "failure.txt", cp.failure + "\n");
  } else {
    WriteCampaign(cp.campaign, cp.config_snapshot, iter_dir);
  }
  WriteTextFile(dir / "series.json", CoverageSeriesJson(state));
  WriteTextFile(dir / "final_config.json", SaveConfig(state.config));
}

}  // namespace predfuzz

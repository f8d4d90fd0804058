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

#include "predfuzz/predfuzz.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "common/error.h"
#include "common/file_util.h"
#include "engine/engine.h"
#include "gen/generator.h"
#include "predicates/record_format.h"
#include "refine/refine.h"
#include "stats/stats.h"
#include "targets/target.h"

struct pf_config {
  predfuzz::GeneratorConfig config;
};

struct pf_campaign {
  predfuzz::GeneratorConfig config;
  predfuzz::CampaignResult result;
};

struct pf_refine {
  predfuzz::RefineState state;
  predfuzz::RefineLoopResult loop;
  std::vector<std::string> warnings;
};

namespace {

using predfuzz::Error;
using predfuzz::ErrorCode;

thread_local std::string g_last_error;

pf_status StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEntryNotFound: return PF_ERR_ENTRY_NOT_FOUND;
    case ErrorCode::kBlockNotFound: return PF_ERR_BLOCK_NOT_FOUND;
    case ErrorCode::kInvalidRange: return PF_ERR_INVALID_RANGE;
    case ErrorCode::kInvalidWeights: return PF_ERR_INVALID_WEIGHTS;
    case ErrorCode::kUnknownKnob: return PF_ERR_UNKNOWN_KNOB;
    case ErrorCode::kParseError: return PF_ERR_PARSE;
    case ErrorCode::kTargetNotFound: return PF_ERR_TARGET_NOT_FOUND;
    case ErrorCode::kDuplicatePredicate: return PF_ERR_DUPLICATE_PREDICATE;
    case ErrorCode::kEntryCorrupt: return PF_ERR_ENTRY_CORRUPT;
    case ErrorCode::kRefinerTimeout: return PF_ERR_REFINER_TIMEOUT;
    case ErrorCode::kRefinerInvalid: return PF_ERR_REFINER_INVALID;
    case ErrorCode::kEmptySample: return PF_ERR_EMPTY_SAMPLE;
    case ErrorCode::kBaselineNotFound: return PF_ERR_BASELINE_NOT_FOUND;
    case ErrorCode::kInvalidArgument: return PF_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return PF_ERR_IO;
  }
  return PF_ERR_INTERNAL;
}

template <typename Fn>
pf_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return StatusFor(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PF_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

predfuzz::CampaignOptions ToOptions(const predfuzz::GeneratorConfig& config, const pf_campaign_options& o) {
  predfuzz::CampaignOptions out;
  out.target_id = config.target_id;
  out.config = config;
  out.mode = predfuzz::ParseFuzzMode(o.mode ? o.mode : "guided");
  out.budget_execs = o.budget_execs;
  out.budget_secs = o.budget_secs;
  out.rng_seed = o.seed;
  out.max_input_size = static_cast<std::size_t>(o.max_input_size);
  out.favored_multiplier = o.favored_multiplier;
  out.sample_every = o.sample_every;
  return out;
}

std::string Hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

extern "C" {

const char* pf_status_name(pf_status status) {
  switch (status) {
    case PF_OK: return "ok";
    case PF_ERR_INTERNAL: return "internal";
    default: break;
  }
  if (status > PF_OK && status < PF_ERR_INTERNAL) {
    static const std::vector<std::string> names = [] {
      std::vector<std::string> v;
      for (int c = 0; c <= static_cast<int>(ErrorCode::kIo); ++c) {
        v.emplace_back(predfuzz::ErrorCodeName(static_cast<ErrorCode>(c)));
      }
      return v;
    }();
    return names[static_cast<std::size_t>(status) - 1].c_str();
  }
  return "unknown";
}

const char* pf_last_error(void) { return g_last_error.c_str(); }

const char* pf_version(void) { return "0.1.0"; }

void pf_string_free(char* s) { std::free(s); }

void pf_bytes_free(uint8_t* bytes) { std::free(bytes); }

pf_status pf_target_ids(char** out_json) {
  return Guard([&] {
    Require(out_json, "null output");
    *out_json = Dup(nlohmann::json(predfuzz::TargetIds()).dump());
  });
}

pf_status pf_analyze(const char* target_id, char** out_records) {
  return Guard([&] {
    Require(target_id && out_records, "null argument");
    const auto build = predfuzz::TargetCfg(target_id);
    *out_records = Dup(predfuzz::FormatStaticRecords(predfuzz::RankPredicates(build.graph)));
  });
}

pf_status pf_target_invocations(const char* target_id, uint64_t* out) {
  return Guard([&] {
    Require(target_id && out, "null argument");
    *out = predfuzz::TargetInvocations(target_id);
  });
}

pf_status pf_config_builtin(const char* target_id, const char* profile, pf_config** out) {
  return Guard([&] {
    Require(target_id && profile && out, "null argument");
    *out = new pf_config{predfuzz::BuiltinConfig(target_id, profile)};
  });
}

pf_status pf_config_load(const char* text, pf_config** out) {
  return Guard([&] {
    Require(text && out, "null argument");
    *out = new pf_config{predfuzz::LoadConfig(text)};
  });
}

pf_status pf_config_load_file(const char* path, pf_config** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    *out = new pf_config{predfuzz::LoadConfig(predfuzz::ReadTextFile(path))};
  });
}

pf_status pf_config_save(const pf_config* config, char** out_text) {
  return Guard([&] {
    Require(config && out_text, "null argument");
    *out_text = Dup(predfuzz::SaveConfig(config->config));
  });
}

const char* pf_config_target(const pf_config* config) {
  return config ? config->config.target_id.c_str() : "";
}

void pf_config_free(pf_config* config) { delete config; }

pf_status pf_generate(const pf_config* config, const uint8_t* stream, size_t stream_len,
                      uint64_t overflow_seed, uint8_t** out_payload, size_t* out_len) {
  return Guard([&] {
    Require(config && out_payload && out_len && (stream || stream_len == 0), "null argument");
    predfuzz::ParamStream s(std::span<const std::uint8_t>(stream, stream_len), overflow_seed);
    const auto in = predfuzz::Generate(config->config, s);
    auto* buf = static_cast<uint8_t*>(std::malloc(in.payload.size() + 1));
    if (!buf) throw std::bad_alloc();
    if (!in.payload.empty()) std::memcpy(buf, in.payload.data(), in.payload.size());
    *out_payload = buf;
    *out_len = in.payload.size();
  });
}

void pf_campaign_options_init(pf_campaign_options* o) {
  if (!o) return;
  const predfuzz::CampaignOptions d;
  o->mode = "guided";
  o->budget_execs = 0;
  o->budget_secs = 0;
  o->seed = 0;
  o->max_input_size = d.max_input_size;
  o->favored_multiplier = d.favored_multiplier;
  o->sample_every = d.sample_every;
}

pf_status pf_campaign_run(const pf_config* config, const pf_campaign_options* options, pf_campaign** out) {
  return Guard([&] {
    Require(config && options && out, "null argument");
    auto result = predfuzz::RunCampaign(ToOptions(config->config, *options));
    *out = new pf_campaign{config->config, std::move(result)};
  });
}

pf_status pf_campaign_run_many(const pf_config* config, const pf_campaign_options* options, size_t count,
                               pf_campaign** out) {
  return Guard([&] {
    Require(config && options && out, "null argument");
    std::vector<predfuzz::CampaignOptions> opts;
    for (size_t i = 0; i < count; ++i) opts.push_back(ToOptions(config->config, options[i]));
    std::vector<predfuzz::CampaignResult> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> threads;
    for (size_t i = 0; i < count; ++i) {
      threads.emplace_back([&, i] {
        try {
          results[i] = predfuzz::RunCampaign(opts[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (size_t i = 0; i < count; ++i) out[i] = new pf_campaign{config->config, std::move(results[i])};
  });
}

uint64_t pf_campaign_executions(const pf_campaign* c) { return c ? c->result.executions : 0; }
size_t pf_campaign_coverage(const pf_campaign* c) { return c ? c->result.final_coverage.size() : 0; }
size_t pf_campaign_corpus_size(const pf_campaign* c) { return c ? c->result.corpus.size() : 0; }
double pf_campaign_duration(const pf_campaign* c) { return c ? c->result.duration_secs : 0; }
double pf_campaign_inputs_per_sec(const pf_campaign* c) { return c ? c->result.inputs_per_sec : 0; }
uint64_t pf_campaign_mutate_calls(const pf_campaign* c) { return c ? c->result.mutate_calls : 0; }

pf_status pf_campaign_summary_json(const pf_campaign* c, char** out_json) {
  return Guard([&] {
    Require(c && out_json, "null argument");
    *out_json = Dup(predfuzz::CampaignSummaryJson(c->result));
  });
}

pf_status pf_campaign_timing_json(const pf_campaign* c, char** out_json) {
  return Guard([&] {
    Require(c && out_json, "null argument");
    *out_json = Dup(predfuzz::CampaignTimingJson(c->result));
  });
}

pf_status pf_campaign_report_json(const pf_campaign* c, char** out_json) {
  return Guard([&] {
    Require(c && out_json, "null argument");
    *out_json = Dup(predfuzz::FormatDynamicReport(c->result.dynamic_report));
  });
}

pf_status pf_campaign_write(const pf_campaign* c, const char* dir) {
  return Guard([&] {
    Require(c && dir, "null argument");
    predfuzz::WriteCampaign(c->result, c->config, dir);
  });
}

void pf_campaign_free(pf_campaign* c) { delete c; }

pf_status pf_replay_dir(const char* campaign_dir, const char* payload_dir, char** out_json) {
  return Guard([&] {
    Require(campaign_dir && out_json, "null argument");
    const std::filesystem::path dir(campaign_dir);
    const auto loaded = predfuzz::LoadCampaignCorpus(dir);
    const auto replay = predfuzz::ReplayCorpus(loaded.config.target_id, loaded.config, loaded.entries);

    nlohmann::ordered_json j;
    j["target"] = loaded.config.target_id;
    j["entries"] = loaded.files;
    j["replayed"] = replay.inputs.size();
    j["coverage"] = replay.coverage.size();
    j["covered_branches"] = replay.coverage;
    const bool have_summary = std::filesystem::exists(dir / "summary.json");
    if (have_summary) {
      const auto summary = nlohmann::json::parse(predfuzz::ReadTextFile(dir / "summary.json"));
      j["recorded_coverage"] = summary.at("final_coverage");
      j["coverage_matches"] =
          summary.at("final_coverage").get<std::size_t>() == replay.coverage.size() &&
          summary.at("covered_branches").get<std::vector<predfuzz::BranchId>>() == replay.coverage;
    }
    std::size_t digest_mismatches = 0;
    auto inputs = nlohmann::ordered_json::array();
    if (payload_dir) predfuzz::EnsureDirectory(payload_dir);
    for (std::size_t i = 0; i < replay.inputs.size(); ++i) {
      const auto& entry = loaded.entries[replay.entry_index[i]];
      const auto& payload = replay.inputs[i].payload;
      const std::uint64_t digest = predfuzz::Fnv1a64(payload);
      const bool match = !have_summary || digest == entry.payload_digest;
      if (!match) ++digest_mismatches;
      const std::string name = predfuzz::StreamFileName(loaded.entry_index[replay.entry_index[i]]);
      inputs.push_back({{"file", name},
                        {"payload_length", payload.size()},
                        {"payload_digest", Hex64(digest)},
                        {"digest_matches", match}});
      if (payload_dir) {
        const auto stem = std::filesystem::path(name).stem().string();
        predfuzz::WriteBinaryFile(std::filesystem::path(payload_dir) / (stem + ".input"), payload);
      }
    }
    j["digest_mismatches"] = digest_mismatches;
    j["inputs"] = std::move(inputs);
    auto errors = nlohmann::ordered_json::array();
    for (const auto& e : loaded.errors) errors.push_back(e);
    for (const auto& e : replay.errors) errors.push_back(e);
    j["errors"] = std::move(errors);
    *out_json = Dup(j.dump(2) + "\n");
  });
}

void pf_refine_options_init(pf_refine_options* o) {
  if (!o) return;
  o->feedback = "static";
  o->endpoint = nullptr;
  o->timeout_ms = 30000;
  o->threshold = predfuzz::kDefaultRefineThreshold;
  o->max_iterations = 10;
  pf_campaign_options_init(&o->session);
  o->session.budget_execs = 20000;
  o->checkpoint_dir = nullptr;
}

pf_status pf_refine_run(const pf_config* start, const pf_refine_options* options, pf_refine** out) {
  return Guard([&] {
    Require(start && options && out, "null argument");
    auto mode = predfuzz::ParseFeedbackMode(options->feedback ? options->feedback : "static");
    const std::chrono::milliseconds timeout(options->timeout_ms);
    auto handle = std::make_unique<pf_refine>();
    if (mode == predfuzz::FeedbackMode::kLlm) {
      Require(options->endpoint != nullptr, "llm feedback needs a refiner endpoint");
      handle->state = predfuzz::MakeRefineState(start->config, mode);
      try {
        auto identified = predfuzz::LlmIdentifyPredicates(options->endpoint, start->config.target_id, timeout);
        handle->warnings = std::move(identified.warnings);
        if (identified.records.empty()) {
          handle->warnings.push_back("refiner identified no predicates; using base feedback");
          handle->state.feedback_mode = predfuzz::FeedbackMode::kBase;
        } else {
          handle->state.static_records = std::move(identified.records);
        }
      } catch (const std::exception& e) {
        handle->warnings.push_back(std::string("predicate identification failed, using base feedback: ") +
                                   e.what());
        handle->state.feedback_mode = predfuzz::FeedbackMode::kBase;
      }
    } else {
      handle->state = predfuzz::MakeRefineState(start->config, mode);
    }

    predfuzz::RefineLoopOptions loop;
    loop.max_iterations = options->max_iterations;
    loop.budget.execs = options->session.budget_execs;
    loop.budget.secs = options->session.budget_secs;
    loop.budget.seed = options->session.seed;
    loop.budget.mode = predfuzz::ParseFuzzMode(options->session.mode ? options->session.mode : "guided");
    if (options->checkpoint_dir) loop.checkpoint_dir = options->checkpoint_dir;
    const predfuzz::Refiner refiner = options->endpoint
                                          ? predfuzz::MakeHttpRefiner(options->endpoint, timeout)
                                          : predfuzz::MakeScriptedRefiner(options->threshold);
    handle->loop = predfuzz::RunRefineLoop(handle->state, refiner, loop);
    *out = handle.release();
  });
}

pf_status pf_refine_series_json(const pf_refine* r, char** out_json) {
  return Guard([&] {
    Require(r && out_json, "null argument");
    *out_json = Dup(predfuzz::CoverageSeriesJson(r->state));
  });
}

pf_status pf_refine_log_json(const pf_refine* r, char** out_json) {
  return Guard([&] {
    Require(r && out_json, "null argument");
    nlohmann::ordered_json j;
    j["target"] = r->state.target_id;
    j["feedback_mode"] = predfuzz::FeedbackModeName(r->state.feedback_mode);
    j["reached_fixpoint"] = r->loop.reached_fixpoint;
    j["fixpoint_iteration"] = r->loop.fixpoint_iteration;
    auto steps = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r->loop.steps.size(); ++i) {
      const auto& s = r->loop.steps[i];
      steps.push_back({{"iteration", r->state.checkpoints[i].iteration},
                       {"changed", s.changed},
                       {"error", s.error},
                       {"note", s.note}});
    }
    j["steps"] = std::move(steps);
    j["warnings"] = r->warnings;
    *out_json = Dup(j.dump(2) + "\n");
  });
}

pf_status pf_refine_final_config(const pf_refine* r, pf_config** out) {
  return Guard([&] {
    Require(r && out, "null argument");
    *out = new pf_config{r->state.config};
  });
}

void pf_refine_free(pf_refine* r) { delete r; }

pf_status pf_mann_whitney_u(const double* xs, size_t nx, const double* ys, size_t ny, const char* alternative,
                            double* out_u, double* out_p) {
  return Guard([&] {
    Require((xs || nx == 0) && (ys || ny == 0) && out_u && out_p, "null argument");
    const auto alt = predfuzz::ParseAlternative(alternative ? alternative : "two-sided");
    const auto r = predfuzz::MannWhitneyU(std::span<const double>(xs, nx), std::span<const double>(ys, ny), alt);
    *out_u = r.u;
    *out_p = r.p;
  });
}

pf_status pf_compare_arms(const char* benchmark, const char* arms_json, const char* baseline,
                          const char* alternative, char** out_json, char** out_text) {
  return Guard([&] {
    Require(benchmark && arms_json && baseline, "null argument");
    std::map<std::string, std::vector<double>> arms;
    try {
      arms = nlohmann::json::parse(arms_json).get<std::map<std::string, std::vector<double>>>();
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kParseError, std::string("arms: ") + e.what());
    }
    const auto alt = predfuzz::ParseAlternative(alternative ? alternative : "two-sided");
    const auto rep = predfuzz::CompareArms(benchmark, arms, baseline, alt);
    if (out_json) *out_json = Dup(predfuzz::ComparisonReportJson(rep));
    if (out_text) *out_text = Dup(predfuzz::ComparisonReportText(rep));
  });
}

}  // extern "C"

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

/* predfuzz C API.
 *
 * Every function returning pf_status reports failures through it and leaves
 * a message for pf_last_error() on the calling thread. Strings and byte
 * buffers handed out by the library are released with pf_string_free and
 * pf_bytes_free; handles with their own *_free function. All *_free
 * functions accept NULL. */
#ifndef PREDFUZZ_PREDFUZZ_H_
#define PREDFUZZ_PREDFUZZ_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PF_API __declspec(dllexport)
#else
#define PF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pf_status {
  PF_OK = 0,
  PF_ERR_ENTRY_NOT_FOUND,
  PF_ERR_BLOCK_NOT_FOUND,
  PF_ERR_INVALID_RANGE,
  PF_ERR_INVALID_WEIGHTS,
  PF_ERR_UNKNOWN_KNOB,
  PF_ERR_PARSE,
  PF_ERR_TARGET_NOT_FOUND,
  PF_ERR_DUPLICATE_PREDICATE,
  PF_ERR_ENTRY_CORRUPT,
  PF_ERR_REFINER_TIMEOUT,
  PF_ERR_REFINER_INVALID,
  PF_ERR_EMPTY_SAMPLE,
  PF_ERR_BASELINE_NOT_FOUND,
  PF_ERR_INVALID_ARGUMENT,
  PF_ERR_IO,
  PF_ERR_INTERNAL
} pf_status;

typedef struct pf_config pf_config;
typedef struct pf_campaign pf_campaign;
typedef struct pf_refine pf_refine;

PF_API const char* pf_status_name(pf_status status);
/* Message of the last failure on this thread, "" if none. */
PF_API const char* pf_last_error(void);
PF_API const char* pf_version(void);

PF_API void pf_string_free(char* s);
PF_API void pf_bytes_free(uint8_t* bytes);

/* ---- targets and static analysis ---- */

/* JSON array of target ids. */
PF_API pf_status pf_target_ids(char** out_json);
/* Ranked static predicate records of the target's CFG. */
PF_API pf_status pf_analyze(const char* target_id, char** out_records);
/* Number of target runs in this process so far. */
PF_API pf_status pf_target_invocations(const char* target_id, uint64_t* out);

/* ---- generator configs ---- */

PF_API pf_status pf_config_builtin(const char* target_id, const char* profile, pf_config** out);
PF_API pf_status pf_config_load(const char* text, pf_config** out);
PF_API pf_status pf_config_load_file(const char* path, pf_config** out);
PF_API pf_status pf_config_save(const pf_config* config, char** out_text);
PF_API const char* pf_config_target(const pf_config* config);
PF_API void pf_config_free(pf_config* config);

/* Decodes one stream into a target input. */
PF_API pf_status pf_generate(const pf_config* config, const uint8_t* stream, size_t stream_len,
                             uint64_t overflow_seed, uint8_t** out_payload, size_t* out_len);

/* ---- campaigns ---- */

typedef struct pf_campaign_options {
  const char* mode;          /* "guided" or "random" */
  uint64_t budget_execs;     /* 0 = unbounded */
  double budget_secs;        /* 0 = unbounded */
  uint64_t seed;
  uint64_t max_input_size;
  int favored_multiplier;
  uint64_t sample_every;
} pf_campaign_options;

PF_API void pf_campaign_options_init(pf_campaign_options* options);

PF_API pf_status pf_campaign_run(const pf_config* config, const pf_campaign_options* options,
                                 pf_campaign** out);
/* Runs `count` campaigns on concurrent threads; options[i] drives out[i].
 * On failure no handles are returned. */
PF_API pf_status pf_campaign_run_many(const pf_config* config, const pf_campaign_options* options,
                                      size_t count, pf_campaign** out);
PF_API uint64_t pf_campaign_executions(const pf_campaign* campaign);
PF_API size_t pf_campaign_coverage(const pf_campaign* campaign);
PF_API size_t pf_campaign_corpus_size(const pf_campaign* campaign);
PF_API double pf_campaign_duration(const pf_campaign* campaign);
PF_API double pf_campaign_inputs_per_sec(const pf_campaign* campaign);
PF_API uint64_t pf_campaign_mutate_calls(const pf_campaign* campaign);
PF_API pf_status pf_campaign_summary_json(const pf_campaign* campaign, char** out_json);
PF_API pf_status pf_campaign_timing_json(const pf_campaign* campaign, char** out_json);
PF_API pf_status pf_campaign_report_json(const pf_campaign* campaign, char** out_json);
/* Writes config.json, corpus/, summary.json, timing.json, predicates.json. */
PF_API pf_status pf_campaign_write(const pf_campaign* campaign, const char* dir);
PF_API void pf_campaign_free(pf_campaign* campaign);

/* ---- replay ---- */

/* Replays a campaign directory. The JSON result holds the replayed
 * coverage, whether it matches summary.json, per-entry payload digest checks
 * and corrupt-entry messages. With payload_dir set, decoded inputs are
 * written there as one file per entry. */
PF_API pf_status pf_replay_dir(const char* campaign_dir, const char* payload_dir, char** out_json);

/* ---- refinement ---- */

typedef struct pf_refine_options {
  const char* feedback;      /* "base", "static" or "llm" */
  const char* endpoint;      /* NULL for the scripted refiner */
  int timeout_ms;
  double threshold;
  int max_iterations;
  pf_campaign_options session;
  const char* checkpoint_dir; /* NULL to skip checkpoint files */
} pf_refine_options;

PF_API void pf_refine_options_init(pf_refine_options* options);
PF_API pf_status pf_refine_run(const pf_config* start, const pf_refine_options* options, pf_refine** out);
/* JSON array of {iteration, coverage, ratio, failed}. */
PF_API pf_status pf_refine_series_json(const pf_refine* refine, char** out_json);
/* JSON object: fixpoint flag and iteration, refiner notes, warnings. */
PF_API pf_status pf_refine_log_json(const pf_refine* refine, char** out_json);
PF_API pf_status pf_refine_final_config(const pf_refine* refine, pf_config** out);
PF_API void pf_refine_free(pf_refine* refine);

/* ---- statistics ---- */

PF_API pf_status pf_mann_whitney_u(const double* xs, size_t nx, const double* ys, size_t ny,
                                   const char* alternative, double* out_u, double* out_p);
/* arms_json: {"arm name": [values...], ...}. Writes the comparison report. */
PF_API pf_status pf_compare_arms(const char* benchmark, const char* arms_json, const char* baseline,
                                 const char* alternative, char** out_json, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* PREDFUZZ_PREDFUZZ_H_ */

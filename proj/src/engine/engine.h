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

#ifndef PREDFUZZ_ENGINE_ENGINE_H_
#define PREDFUZZ_ENGINE_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gen/generator.h"
#include "predicates/predicate_runtime.h"
#include "stream/param_stream.h"

namespace predfuzz {

inline constexpr std::size_t kDefaultMaxInputSize = 4096;
inline constexpr int kMaxStackedMutations = 8;
inline constexpr std::size_t kMaxMutationBlock = 32;
inline constexpr std::size_t kMinFreshStream = 1;
inline constexpr std::size_t kMaxFreshStream = 512;

// ---- mutation ------------------------------------------------------------

enum class MutationOp { kBitFlip, kByteSubstitute, kBlockInsert, kBlockDelete };

void BitFlip(Bytes& bytes, std::size_t pos, int bit);
void ByteSubstitute(Bytes& bytes, std::size_t pos, std::uint8_t value);
void BlockInsert(Bytes& bytes, std::size_t pos, std::span<const std::uint8_t> block);
void BlockDelete(Bytes& bytes, std::size_t pos, std::size_t len);

// Applies k in [1, kMaxStackedMutations] stacked operators, all choices
// drawn from `decisions`. An empty buffer only admits block-insert,
// block-delete never empties the buffer, and a full one never grows.
// Requires max_size >= 1.
Bytes Mutate(const Bytes& bytes, ParamStream& decisions,
             std::size_t max_size = kDefaultMaxInputSize);

// ---- corpus and scheduling -------------------------------------------------

struct CorpusEntry {
  Bytes stream_bytes;
  std::uint64_t overflow_seed = 0;
  std::vector<BranchId> new_branches;  // sorted
  std::uint64_t times_selected = 0;
  bool favored = false;
  std::uint64_t payload_digest = 0;  // Fnv1a64 of the decoded payload
};

// Exact set of covered branch ids.
class CoverageMap {
 public:
  explicit CoverageMap(std::size_t num_branches = 0) : bits_(num_branches, 0) {}

  bool contains(BranchId id) const { return id < bits_.size() && bits_[id]; }
  std::size_t size() const { return count_; }
  void Insert(BranchId id);
  // Ids in ascending order.
  std::vector<BranchId> ids() const;

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

// True iff some id in `run` is not in `map`. Pure.
bool ShouldSave(const CoverageMap& map, std::span<const BranchId> run);

// Round-robin over the corpus in insertion order; each visit yields the
// entry `multiplier` times if it is favored, once otherwise.
class Scheduler {
 public:
  explicit Scheduler(int favored_multiplier = 3) : multiplier_(favored_multiplier) {}

  // Index of the next entry to mutate. Throws kInvalidArgument on an empty
  // corpus. Increments the entry's times_selected.
  std::size_t SelectSeed(std::vector<CorpusEntry>& corpus);
  // Number of completed passes over the corpus.
  std::uint64_t cycles() const { return cycles_; }
  int multiplier() const { return multiplier_; }

 private:
  int multiplier_;
  std::size_t cursor_ = 0;
  int remaining_ = 0;
  bool started_ = false;
  std::uint64_t cycles_ = 0;
};

// ---- campaigns -------------------------------------------------------------

enum class FuzzMode { kGuided, kRandom };
std::string_view FuzzModeName(FuzzMode mode);
// Throws kInvalidArgument.
FuzzMode ParseFuzzMode(std::string_view name);

struct CampaignOptions {
  std::string target_id;
  GeneratorConfig config;
  FuzzMode mode = FuzzMode::kGuided;
  std::uint64_t budget_execs = 0;  // 0 = unbounded
  double budget_secs = 0;          // 0 = unbounded
  std::uint64_t rng_seed = 0;
  std::size_t max_input_size = kDefaultMaxInputSize;
  int favored_multiplier = 3;
  std::uint64_t sample_every = 100;
};

struct CoverageSample {
  std::uint64_t executions = 0;
  double elapsed_secs = 0;
  std::size_t covered = 0;
};

struct CampaignResult {
  std::string target_id;
  std::string profile_name;
  FuzzMode mode = FuzzMode::kGuided;
  std::uint64_t rng_seed = 0;
  std::uint64_t config_fingerprint = 0;
  std::vector<CorpusEntry> corpus;
  std::vector<BranchId> final_coverage;  // sorted
  std::vector<CoverageSample> samples;
  std::uint64_t executions = 0;
  double duration_secs = 0;
  double inputs_per_sec = 0;
  std::uint64_t mutate_calls = 0;
  std::uint64_t status_ok = 0;
  std::uint64_t status_rejected = 0;
  std::uint64_t status_error = 0;
  DynamicPredicateReport dynamic_report;
};

// Throws kTargetNotFound, kInvalidArgument (no budget, config for another
// target, max_input_size 0, multiplier < 1, sample_every 0).
CampaignResult RunCampaign(const CampaignOptions& options);

struct ReplayResult {
  std::vector<BranchId> coverage;        // sorted union of every run
  std::vector<GeneratedInput> inputs;    // one per replayed entry
  std::vector<std::size_t> entry_index;  // corpus index of each input
  std::vector<std::string> errors;       // one line per corrupt entry
};

// Regenerates and re-runs every entry. Entries are replayed independently;
// a failing one is reported in `errors` and skipped.
ReplayResult ReplayCorpus(std::string_view target_id, const GeneratorConfig& config,
                          std::span<const CorpusEntry> corpus);

// ---- persisted corpus ------------------------------------------------------

// Saved stream file: "PFS1", u64 overflow_seed (LE), u64 length (LE), bytes.
Bytes EncodeStreamFile(const CorpusEntry& entry);
// Throws kEntryCorrupt.
CorpusEntry DecodeStreamFile(std::span<const std::uint8_t> data);

std::string StreamFileName(std::size_t index);

// Writes config.json, corpus/, summary.json, timing.json and
// predicates.json under `dir`. Throws kIo.
void WriteCampaign(const CampaignResult& result, const GeneratorConfig& config,
                   const std::filesystem::path& dir);

// Deterministic parts of a campaign: everything except wall-clock values.
std::string CampaignSummaryJson(const CampaignResult& result);
// Wall-clock parts: duration, throughput, sample timestamps.
std::string CampaignTimingJson(const CampaignResult& result);

struct LoadedCorpus {
  GeneratorConfig config;
  std::vector<CorpusEntry> entries;        // readable entries, file order
  std::vector<std::size_t> entry_index;    // position of each in the file list
  std::vector<std::string> errors;         // unreadable files
  std::size_t files = 0;
};

// Reads config.json and corpus/ from a campaign directory. The new_branches
// and payload_digest fields come from summary.json when present. Throws kIo
// when the directory or config is missing.
LoadedCorpus LoadCampaignCorpus(const std::filesystem::path& dir);

}  // namespace predfuzz

#endif  // PREDFUZZ_ENGINE_ENGINE_H_

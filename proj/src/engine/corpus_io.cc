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
#include <cstdio>
#include <map>

#include <nlohmann/json.hpp>

#include "common/error.h"
#include "common/file_util.h"
#include "engine/engine.h"
#include "predicates/record_format.h"

namespace predfuzz {
namespace {

using nlohmann::ordered_json;

constexpr char kMagic[] = {'P', 'F', 'S', '1'};
constexpr std::size_t kHeaderSize = 4 + 8 + 8;

void PutU64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t GetU64(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in[at + static_cast<std::size_t>(i)];
  return v;
}

std::string Hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t ParseHex64(const std::string& s) { return std::stoull(s, nullptr, 16); }

}  // namespace

Bytes EncodeStreamFile(const CorpusEntry& entry) {
  Bytes out(std::begin(kMagic), std::end(kMagic));
  PutU64(out, entry.overflow_seed);
  PutU64(out, entry.stream_bytes.size());
  out.insert(out.end(), entry.stream_bytes.begin(), entry.stream_bytes.end());
  return out;
}

CorpusEntry DecodeStreamFile(std::span<const std::uint8_t> data) {
  if (data.size() < kHeaderSize) throw Error(ErrorCode::kEntryCorrupt, "truncated header");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), data.begin())) {
    throw Error(ErrorCode::kEntryCorrupt, "bad magic");
  }
  CorpusEntry e;
  e.overflow_seed = GetU64(data, 4);
  const std::uint64_t len = GetU64(data, 12);
  if (len != data.size() - kHeaderSize) {
    throw Error(ErrorCode::kEntryCorrupt, "length field " + std::to_string(len) + " but " +
                                              std::to_string(data.size() - kHeaderSize) +
                                              " bytes follow");
  }
  e.stream_bytes.assign(data.begin() + kHeaderSize, data.end());
  return e;
}

std::string StreamFileName(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu.pfs", index);
  return buf;
}

std::string CampaignSummaryJson(const CampaignResult& r) {
  ordered_json j;
  j["target"] = r.target_id;
  j["profile"] = r.profile_name;
  j["mode"] = FuzzModeName(r.mode);
  j["seed"] = r.rng_seed;
  j["config_fingerprint"] = Hex64(r.config_fingerprint);
  j["executions"] = r.executions;
  j["mutate_calls"] = r.mutate_calls;
  j["statuses"] = {{"ok", r.status_ok}, {"rejected", r.status_rejected}, {"error", r.status_error}};
  j["final_coverage"] = r.final_coverage.size();
  j["covered_branches"] = r.final_coverage;
  j["saved_inputs"] = r.corpus.size();
  auto samples = ordered_json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"executions", s.executions}, {"covered", s.covered}});
  }
  j["samples"] = std::move(samples);
  auto corpus = ordered_json::array();
  for (std::size_t i = 0; i < r.corpus.size(); ++i) {
    const auto& e = r.corpus[i];
    corpus.push_back({{"file", StreamFileName(i)},
                      {"stream_length", e.stream_bytes.size()},
                      {"overflow_seed", Hex64(e.overflow_seed)},
                      {"times_selected", e.times_selected},
                      {"payload_digest", Hex64(e.payload_digest)},
                      {"new_branches", e.new_branches}});
  }
  j["corpus"] = std::move(corpus);
  return j.dump(2) + "\n";
}

std::string CampaignTimingJson(const CampaignResult& r) {
  ordered_json j;
  j["executions"] = r.executions;
  j["duration_secs"] = r.duration_secs;
  j["inputs_per_sec"] = r.inputs_per_sec;
  auto samples = ordered_json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"executions", s.executions}, {"elapsed_secs", s.elapsed_secs}});
  }
  j["samples"] = std::move(samples);
  return j.dump(2) + "\n";
}

void WriteCampaign(const CampaignResult& result, const GeneratorConfig& config,
                   const std::filesystem::path& dir) {
  const auto corpus_dir = dir / "corpus";
  EnsureDirectory(corpus_dir);
  for (const auto& stale : std::filesystem::directory_iterator(corpus_dir)) {
    if (stale.path().extension() == ".pfs") std::filesystem::remove(stale.path());
  }
  for (std::size_t i = 0; i < result.corpus.size(); ++i) {
    WriteBinaryFile(corpus_dir / StreamFileName(i), EncodeStreamFile(result.corpus[i]));
  }
  WriteTextFile(dir / "config.json", SaveConfig(config));
  WriteTextFile(dir / "summary.json", CampaignSummaryJson(result));
  WriteTextFile(dir / "timing.json", CampaignTimingJson(result));
  WriteTextFile(dir / "predicates.json", FormatDynamicReport(result.dynamic_report));
}

LoadedCorpus LoadCampaignCorpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::kIo, "no such directory " + dir.string());
  LoadedCorpus out;
  out.config = LoadConfig(ReadTextFile(dir / "config.json"));

  struct Recorded {
    std::vector<BranchId> new_branches;
    std::uint64_t digest = 0;
  };
  std::map<std::string, Recorded> recorded;
  if (std::filesystem::exists(dir / "summary.json")) {
    try {
      const auto j = nlohmann::json::parse(ReadTextFile(dir / "summary.json"));
      for (const auto& e : j.at("corpus")) {
        recorded[e.at("file").get<std::string>()] = {
            e.at("new_branches").get<std::vector<BranchId>>(),
            ParseHex64(e.at("payload_digest").get<std::string>())};
      }
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kParseError, "summary.json: " + std::string(e.what()));
    }
  }

  std::vector<std::filesystem::path> files;
  const auto corpus_dir = dir / "corpus";
  if (std::filesystem::is_directory(corpus_dir)) {
    for (const auto& f : std::filesystem::directory_iterator(corpus_dir)) {
      if (f.path().extension() == ".pfs") files.push_back(f.path());
    }
  }
  std::sort(files.begin(), files.end());
  out.files = files.size();
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      CorpusEntry e = DecodeStreamFile(ReadBinaryFile(files[i]));
      if (auto it = recorded.find(files[i].filename().string()); it != recorded.end()) {
        e.new_branches = it->second.new_branches;
        e.payload_digest = it->second.digest;
      }
      out.entries.push_back(std::move(e));
      out.entry_index.push_back(i);
    } catch (const Error& e) {
      out.errors.push_back(files[i].filename().string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace predfuzz

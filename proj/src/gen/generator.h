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

#ifndef PREDFUZZ_GEN_GENERATOR_H_
#define PREDFUZZ_GEN_GENERATOR_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stream/param_stream.h"

namespace predfuzz {

// Knob names and defaults a target's grammar understands.
struct KnobSchema {
  std::map<std::string, double> weights;
  std::map<std::string, bool> toggles;
  std::map<std::string, std::int64_t> bounds;
};

// Throws kTargetNotFound.
const KnobSchema& SchemaFor(std::string_view target_id);
std::vector<std::string> GeneratorTargets();

// A declarative, machine-refinable description of a generator. Every knob
// of the target's schema is present after loading.
struct GeneratorConfig {
  std::string target_id;
  std::string profile_name;
  std::map<std::string, double> weights;
  std::map<std::string, bool> toggles;
  std::map<std::string, std::int64_t> bounds;

  // Throw kUnknownKnob for names outside the schema.
  double weight(std::string_view name) const;
  bool toggle(std::string_view name) const;
  std::int64_t bound(std::string_view name) const;

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

// Parses the JSON config format, filling unspecified knobs from the schema.
// Throws kParseError, kTargetNotFound or kUnknownKnob.
GeneratorConfig LoadConfig(std::string_view text);
// Canonical JSON (sorted keys, every knob present).
std::string SaveConfig(const GeneratorConfig& config);
// Validates an in-memory config the same way LoadConfig does.
void ValidateConfig(const GeneratorConfig& config);
std::uint64_t ConfigFingerprint(const GeneratorConfig& config);

// Shipped profiles; `profile` is "naive" or "structured". Throws
// kTargetNotFound (or kInvalidArgument for an unknown profile).
GeneratorConfig BuiltinConfig(std::string_view target_id, std::string_view profile);
// Raw text of a shipped profile file.
std::string_view BuiltinProfileText(std::string_view target_id, std::string_view profile);

struct GeneratedInput {
  Bytes payload;
  std::size_t decisions_consumed = 0;  // stream bytes read
  std::uint64_t config_fingerprint = 0;
};

// A validated config with its fingerprint computed once; reentrant.
class Generator {
 public:
  explicit Generator(GeneratorConfig config);

  // Decodes the stream into a target input. Total: never fails, whatever
  // the stream holds.
  GeneratedInput Generate(ParamStream& stream) const;

  const GeneratorConfig& config() const { return config_; }
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  GeneratorConfig config_;
  std::uint64_t fingerprint_;
};

GeneratedInput Generate(const GeneratorConfig& config, ParamStream& stream);

// 64-bit FNV-1a; used for fingerprints and payload digests.
std::uint64_t Fnv1a64(std::string_view data);
std::uint64_t Fnv1a64(const Bytes& data);

namespace gen_internal {
void GenerateJson(const GeneratorConfig& c, ParamStream& s, std::string& out);
void GenerateMinilang(const GeneratorConfig& c, ParamStream& s, std::string& out);
void GenerateBzh(const GeneratorConfig& c, ParamStream& s, Bytes& out);
}  // namespace gen_internal

}  // namespace predfuzz

#endif  // PREDFUZZ_GEN_GENERATOR_H_

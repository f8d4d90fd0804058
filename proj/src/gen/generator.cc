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

#include "gen/generator.h"

#include <nlohmann/json.hpp>

#include "common/error.h"
#include "gen/profiles.h"

namespace predfuzz {
namespace {

using nlohmann::json;

const std::map<std::string, KnobSchema, std::less<>>& Schemas() {
  static const auto* schemas = new std::map<std::string, KnobSchema, std::less<>>{
      {"bzh",
       {{{"data_block", 9},
         {"eos_block", 1},
         {"crc_valid", 9},
         {"crc_corrupt", 1},
         {"data_fresh", 3},
         {"data_repeat", 1},
         {"trailer_eos", 2},
         {"trailer_none", 1},
         {"trailer_garbage", 1}},
        {{"emit_header", false},
         {"emit_block_magic", false},
         {"emit_crc", false},
         {"emit_randomised", false},
         {"emit_tables", false},
         {"bound_orig_ptr", false}},
        {{"max_len", 256}}}},
      {"json",
       {{{"value_object", 1},
         {"value_array", 1},
         {"value_string", 1},
         {"value_number", 1},
         {"value_true", 1},
         {"value_false", 1},
         {"value_null", 1},
         {"syntax_ok", 1},
         {"syntax_error", 0}},
        {{"top_level_container", false},
         {"emit_escapes", false},
         {"emit_unicode_escapes", false},
         {"emit_fractions", false},
         {"emit_exponents", false},
         {"emit_negative", false},
         {"emit_whitespace", false}},
        {{"max_depth", 2}, {"max_len", 3}, {"max_string_len", 6}}}},
      {"minilang",
       {{{"stmt_assign", 2},
         {"stmt_expr", 2},
         {"stmt_if", 1},
         {"expr_literal", 3},
         {"expr_var", 2},
         {"expr_plus", 1},
         {"expr_call", 1},
         {"plus_same_type", 4},
         {"plus_mixed_lists", 1},
         {"plus_mismatch", 1},
         {"override_match", 3},
         {"override_mismatch", 1}},
        {{"enable_functions", false},
         {"enable_classes", false},
         {"enable_inheritance", false},
         {"enable_method_override", false},
         {"mismatch_signature", false},
         {"typed_returns", false},
         {"enable_lists", false},
         {"enable_list_plus", false},
         {"enable_if", false}},
        {{"max_depth", 3},
         {"max_classes", 3},
         {"max_methods", 2},
         {"max_stmts", 5},
         {"max_functions", 2},
         {"max_vars", 3}}}},
  };
  return *schemas;
}

[[noreturn]] void Unknown(std::string_view kind, std::string_view name) {
  throw Error(ErrorCode::kUnknownKnob, std::string(kind) + " " + std::string(name));
}

template <typename Map>
auto Lookup(const Map& m, std::string_view kind, std::string_view name) {
  auto it = m.find(std::string(name));
  if (it == m.end()) Unknown(kind, name);
  return it->second;
}

}  // namespace

const KnobSchema& SchemaFor(std::string_view target_id) {
  auto it = Schemas().find(target_id);
  if (it == Schemas().end()) {
    throw Error(ErrorCode::kTargetNotFound, std::string(target_id));
  }
  return it->second;
}

std::vector<std::string> GeneratorTargets() {
  std::vector<std::string> out;
  for (const auto& [name, schema] : Schemas()) out.push_back(name);
  return out;
}

double GeneratorConfig::weight(std::string_view name) const {
  return Lookup(weights, "weight", name);
}
bool GeneratorConfig::toggle(std::string_view name) const {
  return Lookup(toggles, "toggle", name);
}
std::int64_t GeneratorConfig::bound(std::string_view name) const {
  return Lookup(bounds, "bound", name);
}

void ValidateConfig(const GeneratorConfig& c) {
  const KnobSchema& schema = SchemaFor(c.target_id);
  for (const auto& [name, v] : c.weights) {
    if (!schema.weights.count(name)) Unknown("weight", name);
    if (!(v >= 0)) throw Error(ErrorCode::kParseError, "weight " + name + " must be >= 0");
  }
  for (const auto& [name, v] : c.toggles) {
    if (!schema.toggles.count(name)) Unknown("toggle", name);
  }
  for (const auto& [name, v] : c.bounds) {
    if (!schema.bounds.count(name)) Unknown("bound", name);
    if (v < 1) throw Error(ErrorCode::kParseError, "bound " + name + " must be >= 1");
  }
  for (const auto& [name, v] : schema.weights) {
    if (!c.weights.count(name)) throw Error(ErrorCode::kParseError, "missing weight " + name);
  }
  for (const auto& [name, v] : schema.toggles) {
    if (!c.toggles.count(name)) throw Error(ErrorCode::kParseError, "missing toggle " + name);
  }
  for (const auto& [name, v] : schema.bounds) {
    if (!c.bounds.count(name)) throw Error(ErrorCode::kParseError, "missing bound " + name);
  }
}

GeneratorConfig LoadConfig(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "config must be an object");
  for (const auto& [key, v] : doc.items()) {
    if (key != "target_id" && key != "profile_name" && key != "weights" &&
        key != "toggles" && key != "bounds") {
      throw Error(ErrorCode::kParseError, "unexpected field " + key);
    }
  }
  if (!doc.contains("target_id") || !doc["target_id"].is_string()) {
    throw Error(ErrorCode::kParseError, "missing string target_id");
  }
  GeneratorConfig c;
  c.target_id = doc["target_id"].get<std::string>();
  const KnobSchema& schema = SchemaFor(c.target_id);
  c.profile_name = doc.value("profile_name", std::string("custom"));
  c.weights = schema.weights;
  c.toggles = schema.toggles;
  c.bounds = schema.bounds;

  auto section = [&](const char* name) -> const json* {
    if (!doc.contains(name)) return nullptr;
    if (!doc[name].is_object()) throw Error(ErrorCode::kParseError, std::string(name) + " must be an object");
    return &doc[name];
  };
  if (const json* w = section("weights")) {
    for (const auto& [k, v] : w->items()) {
      if (!schema.weights.count(k)) Unknown("weight", k);
      if (!v.is_number()) throw Error(ErrorCode::kParseError, "weight " + k + " is not a number");
      c.weights[k] = v.get<double>();
    }
  }
  if (const json* t = section("toggles")) {
    for (const auto& [k, v] : t->items()) {
      if (!schema.toggles.count(k)) Unknown("toggle", k);
      if (!v.is_boolean()) throw Error(ErrorCode::kParseError, "toggle " + k + " is not a boolean");
      c.toggles[k] = v.get<bool>();
    }
  }
  if (const json* b = section("bounds")) {
    for (const auto& [k, v] : b->items()) {
      if (!schema.bounds.count(k)) Unknown("bound", k);
      if (!v.is_number_integer()) throw Error(ErrorCode::kParseError, "bound " + k + " is not an integer");
      c.bounds[k] = v.get<std::int64_t>();
    }
  }
  ValidateConfig(c);
  return c;
}

std::string SaveConfig(const GeneratorConfig& c) {
  json doc;
  doc["target_id"] = c.target_id;
  doc["profile_name"] = c.profile_name;
  doc["weights"] = c.weights;
  doc["toggles"] = c.toggles;
  doc["bounds"] = c.bounds;
  return doc.dump(2) + "\n";
}

std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t Fnv1a64(const Bytes& data) {
  return Fnv1a64(std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
}

std::uint64_t ConfigFingerprint(const GeneratorConfig& c) { return Fnv1a64(SaveConfig(c)); }

std::string_view BuiltinProfileText(std::string_view target_id, std::string_view profile) {
  SchemaFor(target_id);
  for (const auto& p : ShippedProfiles()) {
    if (p.target_id == target_id && p.profile == profile) return p.text;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "no profile " + std::string(profile) + " for " + std::string(target_id));
}

GeneratorConfig BuiltinConfig(std::string_view target_id, std::string_view profile) {
  return LoadConfig(BuiltinProfileText(target_id, profile));
}

Generator::Generator(GeneratorConfig config) : config_(std::move(config)) {
  ValidateConfig(config_);
  fingerprint_ = ConfigFingerprint(config_);
}

GeneratedInput Generator::Generate(ParamStream& stream) const {
  GeneratedInput out;
  const std::size_t start = stream.cursor();
  if (config_.target_id == "bzh") {
    gen_internal::GenerateBzh(config_, stream, out.payload);
  } else {
    std::string text;
    if (config_.target_id == "json") {
      gen_internal::GenerateJson(config_, stream, text);
    } else {
      gen_internal::GenerateMinilang(config_, stream, text);
    }
    out.payload.assign(text.begin(), text.end());
  }
  out.decisions_consumed = stream.cursor() - start;
  out.config_fingerprint = fingerprint_;
  return out;
}

GeneratedInput Generate(const GeneratorConfig& config, ParamStream& stream) {
  return Generator(config).Generate(stream);
}

}  // namespace predfuzz

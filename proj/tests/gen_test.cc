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

#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "common/error.h"
#include "gen/generator.h"
#include "targets/target.h"

namespace predfuzz {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

std::string Text(const GeneratedInput& g) { return std::string(g.payload.begin(), g.payload.end()); }

// 1000 uniformly random streams, fixed seed.
std::vector<std::pair<Bytes, std::uint64_t>> RandomStreams(std::uint64_t seed, int count = 1000) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Bytes, std::uint64_t>> out;
  for (int i = 0; i < count; ++i) {
    Bytes b(1 + rng() % 512);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    out.emplace_back(std::move(b), rng());
  }
  return out;
}

std::vector<std::string> Payloads(const GeneratorConfig& c, std::uint64_t seed = 77) {
  std::vector<std::string> out;
  for (const auto& [b, s] : RandomStreams(seed)) {
    ParamStream stream(b, s);
    out.push_back(Text(Generate(c, stream)));
  }
  return out;
}

std::size_t CountMatching(const std::vector<std::string>& payloads, const std::regex& re) {
  std::size_t n = 0;
  for (const auto& p : payloads) n += std::regex_search(p, re) ? 1 : 0;
  return n;
}

TEST(Config, MinimalConfigGetsDefaults) {
  const auto c = LoadConfig(R"({"target_id": "json", "profile_name": "mine"})");
  EXPECT_EQ(c.profile_name, "mine");
  const auto& schema = SchemaFor("json");
  EXPECT_EQ(c.weights, schema.weights);
  EXPECT_EQ(c.toggles, schema.toggles);
  EXPECT_EQ(c.bounds, schema.bounds);
}

TEST(Config, UnknownKnob) {
  EXPECT_EQ(CodeOf([] {
              LoadConfig(R"({"target_id": "minilang", "profile_name": "x", "toggles": {"enable_warp_drive": true}})");
            }),
            ErrorCode::kUnknownKnob);
  const auto c = BuiltinConfig("json", "naive");
  EXPECT_EQ(CodeOf([&] { c.toggle("enable_warp_drive"); }), ErrorCode::kUnknownKnob);
}

TEST(Config, MalformedText) {
  EXPECT_EQ(CodeOf([] { LoadConfig("{not json"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { LoadConfig(R"({"profile_name": "x"})"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { LoadConfig(R"({"target_id": "bzh", "bounds": {"max_len": "big"}})"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { LoadConfig(R"({"target_id": "nope"})"); }), ErrorCode::kTargetNotFound);
}

TEST(Config, RejectsInvalidValues) {
  auto c = BuiltinConfig("json", "structured");
  c.bounds["max_depth"] = 0;
  EXPECT_ANY_THROW(ValidateConfig(c));
  c = BuiltinConfig("json", "structured");
  c.weights["value_object"] = -1;
  EXPECT_ANY_THROW(ValidateConfig(c));
}

TEST(Config, SaveLoadRoundTrip) {
  for (const auto& t : GeneratorTargets()) {
    for (const char* p : {"naive", "structured"}) {
      const auto c = BuiltinConfig(t, p);
      const auto text = SaveConfig(c);
      EXPECT_EQ(LoadConfig(text), c);
      EXPECT_EQ(SaveConfig(LoadConfig(text)), text);
      EXPECT_EQ(ConfigFingerprint(LoadConfig(text)), ConfigFingerprint(c));
    }
  }
}

TEST(Config, FingerprintTracksContent) {
  auto c = BuiltinConfig("minilang", "structured");
  const auto before = ConfigFingerprint(c);
  c.toggles["mismatch_signature"] = true;
  EXPECT_NE(ConfigFingerprint(c), before);
}

TEST(Builtin, BzhStructuredGolden) {
  const auto c = BuiltinConfig("bzh", "structured");
  for (const char* t : {"emit_header", "emit_block_magic", "emit_crc", "emit_randomised", "emit_tables",
                        "bound_orig_ptr"}) {
    EXPECT_TRUE(c.toggle(t)) << t;
  }
  EXPECT_EQ(LoadConfig(BuiltinProfileText("bzh", "structured")), c);
}

TEST(Builtin, BzhNaiveHasNoStructure) {
  const auto c = BuiltinConfig("bzh", "naive");
  for (const auto& [name, on] : c.toggles) EXPECT_FALSE(on) << name;
}

TEST(Builtin, MinilangStructured) {
  const auto c = BuiltinConfig("minilang", "structured");
  EXPECT_TRUE(c.toggle("enable_inheritance"));
  EXPECT_TRUE(c.toggle("typed_returns"));
  EXPECT_FALSE(c.toggle("mismatch_signature"));
}

TEST(Builtin, JsonStructuredDepth) { EXPECT_GE(BuiltinConfig("json", "structured").bound("max_depth"), 3); }

TEST(Builtin, UnknownTargetAndProfile) {
  EXPECT_EQ(CodeOf([] { BuiltinConfig("nope", "naive"); }), ErrorCode::kTargetNotFound);
  EXPECT_EQ(CodeOf([] { BuiltinConfig("json", "fancy"); }), ErrorCode::kInvalidArgument);
}

TEST(Generate, JsonAllZeroStreamIsMinimalDocument) {
  ParamStream s(Bytes(4096, 0), 0);
  EXPECT_EQ(Text(Generate(BuiltinConfig("json", "structured"), s)), "{}");
}

TEST(Generate, MinilangAllZeroStreamIsPinned) {
  ParamStream s(Bytes(4096, 0), 0);
  EXPECT_EQ(Text(Generate(BuiltinConfig("minilang", "structured"), s)),
            "class C0(object):\n"
            "  a0: int = 0\n"
            "  def m0(self: C0) -> int:\n"
            "    return 0\n"
            "class C1(C0):\n"
            "  a1: int = 0\n"
            "  def m0(self: C1) -> int:\n"
            "    return 0\n"
            "def f0() -> int:\n"
            "  return 0\n"
            "v0: int = 0\n"
            "v0 = 0\n");
}

TEST(Generate, BzhNaiveIsIdentity) {
  const auto c = BuiltinConfig("bzh", "naive");
  for (const auto& [b, seed] : RandomStreams(5, 200)) {
    ParamStream s(b, seed);
    const auto g = Generate(c, s);
    EXPECT_EQ(g.payload, b);
    EXPECT_EQ(g.decisions_consumed, b.size());
  }
  ParamStream empty(Bytes{}, 9);
  EXPECT_TRUE(Generate(c, empty).payload.empty());
}

TEST(Generate, BzhStructuredHeader) {
  const auto c = BuiltinConfig("bzh", "structured");
  for (const auto& p : Payloads(c)) {
    ASSERT_GE(p.size(), 4u);
    EXPECT_EQ(p.substr(0, 3), "BZh");
    EXPECT_TRUE(p[3] >= '1' && p[3] <= '9');
  }
}

TEST(Generate, DeterministicAndFingerprinted) {
  for (const auto& t : GeneratorTargets()) {
    const Generator gen(BuiltinConfig(t, "structured"));
    for (const auto& [b, seed] : RandomStreams(6, 100)) {
      ParamStream s1(b, seed);
      ParamStream s2(b, seed);
      const auto a = gen.Generate(s1);
      const auto c = gen.Generate(s2);
      EXPECT_EQ(a.payload, c.payload);
      EXPECT_EQ(a.decisions_consumed, c.decisions_consumed);
      EXPECT_EQ(a.config_fingerprint, gen.fingerprint());
      EXPECT_EQ(a.decisions_consumed, s1.cursor());
    }
  }
}

TEST(Generate, TotalOnShortAndEmptyStreams) {
  for (const auto& t : GeneratorTargets()) {
    for (const char* p : {"naive", "structured"}) {
      const auto c = BuiltinConfig(t, p);
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        ParamStream s(Bytes(seed % 3, static_cast<std::uint8_t>(seed)), seed);
        EXPECT_NO_THROW(Generate(c, s));
      }
    }
  }
}

// Classes with their parent and method names, from the generated text.
struct ClassInfo {
  std::string parent;
  std::set<std::string> methods;
};

std::map<std::string, ClassInfo> Classes(const std::string& program) {
  static const std::regex cls(R"(^class (\w+)\((\w+)\):)");
  static const std::regex def(R"(^  def (\w+)\()");
  std::map<std::string, ClassInfo> out;
  std::string current;
  std::istringstream in(program);
  for (std::string line; std::getline(in, line);) {
    std::smatch m;
    if (std::regex_search(line, m, cls)) {
      current = m[1];
      out[current].parent = m[2];
    } else if (!line.empty() && line[0] != ' ') {
      current.clear();
    } else if (!current.empty() && std::regex_search(line, m, def)) {
      out[current].methods.insert(m[1]);
    }
  }
  return out;
}

TEST(Generate, MinilangOverridePairInEveryProgram) {
  const auto c = BuiltinConfig("minilang", "structured");
  ASSERT_TRUE(c.toggle("enable_inheritance") && c.toggle("enable_method_override"));
  for (const auto& p : Payloads(c)) {
    const auto classes = Classes(p);
    bool found = false;
    for (const auto& [name, info] : classes) {
      const auto parent = classes.find(info.parent);
      if (parent == classes.end()) continue;
      for (const auto& m : info.methods) found = found || parent->second.methods.count(m) > 0;
    }
    EXPECT_TRUE(found) << p;
    if (!found) break;
  }
}

TEST(Generate, MismatchSignatureTriggersCheckerError) {
  auto c = BuiltinConfig("minilang", "structured");
  c.toggles["mismatch_signature"] = true;
  const auto& target = FindTarget("minilang");
  std::size_t hits = 0;
  for (const auto& p : Payloads(c)) {
    const auto out = RunTarget(target, std::span(reinterpret_cast<const std::uint8_t*>(p.data()), p.size()));
    hits += out.reason.find("different type signature") != std::string::npos ? 1 : 0;
  }
  EXPECT_GE(hits, 1u);
}

TEST(Generate, JsonToggleConstructsAppear) {
  const auto c = BuiltinConfig("json", "structured");
  const auto payloads = Payloads(c);
  EXPECT_GE(CountMatching(payloads, std::regex(R"(\\["\\/bfnrt])")), 1u) << "emit_escapes";
  EXPECT_GE(CountMatching(payloads, std::regex(R"(\\u[0-9a-fA-F]{4})")), 1u) << "emit_unicode_escapes";
  EXPECT_GE(CountMatching(payloads, std::regex(R"(\d\.\d)")), 1u) << "emit_fractions";
  EXPECT_GE(CountMatching(payloads, std::regex(R"(\d[eE][+-]?\d)")), 1u) << "emit_exponents";
  EXPECT_GE(CountMatching(payloads, std::regex(R"([:\[,\s]-\d)")), 1u) << "emit_negative";
  EXPECT_GE(CountMatching(payloads, std::regex(R"([ \t\n\r])")), 1u) << "emit_whitespace";
  EXPECT_GE(CountMatching(payloads, std::regex(R"(^\s*[\[{])")), 1u) << "top_level_container";

  auto off = c;
  for (auto& [name, on] : off.toggles) on = false;
  const auto plain = Payloads(off);
  EXPECT_EQ(CountMatching(plain, std::regex(R"(\\u[0-9a-fA-F]{4})")), 0u);
  EXPECT_EQ(CountMatching(plain, std::regex(R"(\d[eE][+-]?\d)")), 0u);
}

TEST(Generate, MinilangToggleConstructsAppear) {
  auto c = BuiltinConfig("minilang", "structured");
  const auto payloads = Payloads(c);
  EXPECT_GE(CountMatching(payloads, std::regex(R"((^|\n)class )")), 1u) << "enable_classes";
  EXPECT_GE(CountMatching(payloads, std::regex(R"((^|\n)class \w+\(C\d+\))")), 1u) << "enable_inheritance";
  EXPECT_GE(CountMatching(payloads, std::regex(R"((^|\n)def )")), 1u) << "enable_functions";
  EXPECT_GE(CountMatching(payloads, std::regex(R"(\[)")), 1u) << "enable_lists";
  EXPECT_GE(CountMatching(payloads, std::regex(R"(\] \+ \[)")), 1u) << "enable_list_plus";
  EXPECT_GE(CountMatching(payloads, std::regex(R"(\bif )")), 1u) << "enable_if";

  auto off = c;
  for (auto& [name, on] : off.toggles) on = false;
  const auto plain = Payloads(off);
  EXPECT_EQ(CountMatching(plain, std::regex(R"((^|\n)class )")), 0u);
  EXPECT_EQ(CountMatching(plain, std::regex(R"(\bif )")), 0u);
}

TEST(Generate, TypedReturnsKeepProgramsWellTyped) {
  const auto& target = FindTarget("minilang");
  auto count_ok = [&](const GeneratorConfig& c) {
    std::size_t ok = 0;
    for (const auto& p : Payloads(c)) {
      const auto out = RunTarget(target, std::span(reinterpret_cast<const std::uint8_t*>(p.data()), p.size()));
      ok += out.status == RunStatus::kOk ? 1 : 0;
    }
    return ok;
  };
  auto typed = BuiltinConfig("minilang", "structured");
  auto untyped = typed;
  untyped.toggles["typed_returns"] = false;
  EXPECT_GT(count_ok(typed), count_ok(untyped));
}

TEST(Generate, BzhToggleConstructsAppear) {
  const auto& target = FindTarget("bzh");
  auto count_ok = [&](const GeneratorConfig& c) {
    std::size_t ok = 0;
    for (const auto& p : Payloads(c)) {
      const auto out = RunTarget(target, std::span(reinterpret_cast<const std::uint8_t*>(p.data()), p.size()));
      ok += out.status == RunStatus::kOk ? 1 : 0;
    }
    return ok;
  };
  const auto full = BuiltinConfig("bzh", "structured");
  const std::size_t all_on = count_ok(full);
  EXPECT_GE(all_on, 1u);
  const std::string magic = "\x31\x41\x59\x26\x53\x59";
  EXPECT_GE(CountMatching(Payloads(full), std::regex("^BZh[1-9]" + magic)), 1u);
  for (const char* t : {"emit_header", "emit_block_magic", "emit_crc", "emit_randomised", "emit_tables",
                        "bound_orig_ptr"}) {
    auto c = full;
    c.toggles[t] = false;
    EXPECT_LT(count_ok(c), all_on) << t;
  }
}

}  // namespace
}  // namespace predfuzz

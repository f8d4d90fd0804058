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
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "cfg/cfg.h"
#include "common/error.h"
#include "gen/generator.h"
#include "targets/embedded.h"
#include "targets/target.h"

namespace predfuzz {
namespace {

std::span<const std::uint8_t> AsBytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

bool Hit(const TargetBinding& t, const RunOutcome& out, const std::string& predicate, int line) {
  const auto id = t.branches->Find(predicate, line);
  if (!id) throw std::runtime_error("unknown branch " + predicate);
  return std::find(out.branches_hit.begin(), out.branches_hit.end(), *id) != out.branches_hit.end();
}

TEST(Registry, KnownTargets) {
  const auto ids = TargetIds();
  EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()), (std::set<std::string>{"bzh", "json", "minilang"}));
  try {
    FindTarget("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTargetNotFound);
  }
  EXPECT_THROW(TargetCfg("nope"), Error);
}

// ---- minilang ----------------------------------------------------------------

TEST(Minilang, TrivialProgramIsOk) {
  const auto out = RunTarget(FindTarget("minilang"), AsBytes("x:int = 1"));
  EXPECT_EQ(out.status, RunStatus::kOk) << out.reason;
}

TEST(Minilang, OverrideWithDifferentSignature) {
  const auto& t = FindTarget("minilang");
  const std::string program =
      "class A(object):\n"
      "  def m(self: A) -> int:\n"
      "    return 1\n"
      "class B(A):\n"
      "  def m(self: B, x: int) -> int:\n"
      "    return x\n";
  const auto out = RunTarget(t, AsBytes(program));
  EXPECT_EQ(out.status, RunStatus::kRejected);
  EXPECT_NE(out.reason.find("different type signature"), std::string::npos) << out.reason;
  EXPECT_TRUE(Hit(t, out, "minilang.DeclarationAnalyzer.analyzeMethod:303", 304));
  EXPECT_TRUE(Hit(t, out, "minilang.DeclarationAnalyzer.analyzeMethod:305", 306));
}

TEST(Minilang, MatchingOverrideIsOk) {
  const auto& t = FindTarget("minilang");
  const std::string program =
      "class A(object):\n"
      "  def m(self: A) -> int:\n"
      "    return 1\n"
      "class B(A):\n"
      "  def m(self: B) -> int:\n"
      "    return 2\n";
  const auto out = RunTarget(t, AsBytes(program));
  EXPECT_EQ(out.status, RunStatus::kOk) << out.reason;
  EXPECT_TRUE(Hit(t, out, "minilang.DeclarationAnalyzer.analyzeMethod:305", 307));
  EXPECT_FALSE(Hit(t, out, "minilang.DeclarationAnalyzer.analyzeMethod:305", 306));
}

TEST(Minilang, MixedListPlusTakesHighBranch) {
  const auto& t = FindTarget("minilang");
  const auto out = RunTarget(t, AsBytes("[1,2] + [\"hello\"]\n"));
  EXPECT_TRUE(Hit(t, out, "minilang.TypeChecker.analyzePlus:206", 208));
  EXPECT_FALSE(Hit(t, out, "minilang.TypeChecker.analyzePlus:206", 207));
  const auto same = RunTarget(t, AsBytes("1 + 2\n"));
  EXPECT_TRUE(Hit(t, same, "minilang.TypeChecker.analyzePlus:206", 207));
}

TEST(Minilang, PhaseNamedInRejection) {
  const auto& t = FindTarget("minilang");
  EXPECT_EQ(RunTarget(t, AsBytes("x: int = \"abc\n")).reason.rfind("lex", 0), 0u);
  EXPECT_EQ(RunTarget(t, AsBytes("x: int = = 1\n")).reason.rfind("parse", 0), 0u);
  EXPECT_EQ(RunTarget(t, AsBytes("x: int = True\n")).reason.rfind("typecheck", 0), 0u);
}

// ---- json --------------------------------------------------------------------

TEST(Json, EmptyObjectIsOk) { EXPECT_EQ(RunTarget(FindTarget("json"), AsBytes("{}")).status, RunStatus::kOk); }

TEST(Json, DeepNestingBranch) {
  const auto& t = FindTarget("json");
  const auto deep = RunTarget(t, AsBytes("[[[[1]]]]"));
  EXPECT_EQ(deep.status, RunStatus::kOk);
  EXPECT_TRUE(Hit(t, deep, "json.JsonReader.parseValue:30", 31));
  const auto flat = RunTarget(t, AsBytes("[[1]]"));
  EXPECT_FALSE(Hit(t, flat, "json.JsonReader.parseValue:30", 31));
}

TEST(Json, RejectsWithOffset) {
  const auto out = RunTarget(FindTarget("json"), AsBytes("{"));
  EXPECT_EQ(out.status, RunStatus::kRejected);
  EXPECT_EQ(out.reason, "offset 1");
}

TEST(Json, ValidDocuments) {
  const auto& t = FindTarget("json");
  for (const std::string doc : {R"({"a": [1, -2.5e+3, true, false, null, "xé\n"]})", "  [ ]  ", "\"s\"", "0"}) {
    EXPECT_EQ(RunTarget(t, AsBytes(doc)).status, RunStatus::kOk) << doc;
  }
  for (const std::string doc : {"[1,]", "{\"a\" 1}", "01x", "tru", "[1] x"}) {
    EXPECT_EQ(RunTarget(t, AsBytes(doc)).status, RunStatus::kRejected) << doc;
  }
}

// ---- bzh ---------------------------------------------------------------------

TEST(Bzh, EmptyInputFailsHeader) {
  const auto out = RunTarget(FindTarget("bzh"), AsBytes(""));
  EXPECT_EQ(out.status, RunStatus::kRejected);
  EXPECT_EQ(out.reason, "header");
}

TEST(Bzh, WrongBlockMagic) {
  const auto& t = FindTarget("bzh");
  const auto out = RunTarget(t, AsBytes("BZh9XXXXXXXXXXXX"));
  EXPECT_EQ(out.reason, "block_magic");
  EXPECT_TRUE(Hit(t, out, "bzh.BZip2CompressorInputStream.init:101", 102));
}

TEST(Bzh, StructuredInputsReachInnerLogic) {
  const auto& t = FindTarget("bzh");
  const Generator gen(BuiltinConfig("bzh", "structured"));
  std::mt19937_64 rng(3);
  std::size_t ok = 0;
  bool inner = false;
  for (int i = 0; i < 300; ++i) {
    Bytes b(256);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    ParamStream s(b, rng());
    const auto out = RunTarget(t, gen.Generate(s).payload);
    if (out.status == RunStatus::kOk) {
      ++ok;
      inner = inner || Hit(t, out, "bzh.BZip2CompressorInputStream.setupBlock:180", 181) ||
              Hit(t, out, "bzh.BZip2CompressorInputStream.setupBlock:180", 182);
    }
  }
  EXPECT_GT(ok, 0u);
  EXPECT_TRUE(inner);
}

TEST(Bzh, HeaderFailureGatesEverything) {
  const auto& t = FindTarget("bzh");
  const std::set<std::string> header = {"bzh.BZip2CompressorInputStream.init:101",
                                        "bzh.BZip2CompressorInputStream.init:104",
                                        "bzh.BZip2CompressorInputStream.init:107"};
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5000; ++i) {
    Bytes b(rng() % 64);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    if (i % 2 == 0 && b.size() >= 3) {
      b[0] = 'B';
      b[1] = 'Z';
    }
    const auto out = RunTarget(t, b);
    if (out.reason != "header") continue;
    for (BranchId id : out.branches_hit) {
      const auto [p, branch] = t.branches->Locate(id);
      ASSERT_TRUE(header.count(t.branches->meta(p).predicate_id)) << t.branches->meta(p).predicate_id;
    }
  }
}

// ---- all targets -------------------------------------------------------------

TEST(AllTargets, ArbitraryInputsTerminate) {
  std::mt19937_64 rng(5);
  for (const auto& id : TargetIds()) {
    const auto& t = FindTarget(id);
    for (int i = 0; i < 2000; ++i) {
      Bytes b(rng() % 4097);
      for (auto& x : b) x = static_cast<std::uint8_t>(rng() % 4 == 0 ? "[{(\"\\ :\n"[rng() % 9] : rng());
      const auto out = RunTarget(t, b);
      for (BranchId h : out.branches_hit) ASSERT_LT(h, t.branches->num_branches());
    }
  }
}

TEST(AllTargets, InstrumentationAlignsWithCfg) {
  for (const auto& id : TargetIds()) {
    const auto& t = FindTarget(id);
    const auto build = TargetCfg(id);
    for (const auto& d : build.dangling_calls) EXPECT_NE(d.find("-> readByte"), std::string::npos) << d;
    const auto records = RankPredicates(build.graph);
    for (const auto& m : t.predicate_metas()) {
      const auto it = std::find_if(records.begin(), records.end(), [&](const StaticPredicateRecord& r) {
        return r.source_class == m.source_class && r.source_method == m.source_method && r.line == m.predicate_line;
      });
      ASSERT_NE(it, records.end()) << m.predicate_id;
      std::vector<int> lines;
      for (const auto& b : it->branches) lines.push_back(b.line);
      EXPECT_EQ(lines, m.branch_lines) << m.predicate_id;
    }
    EXPECT_GE(records.size(), t.predicate_metas().size());
  }
}

TEST(AllTargets, SourcesAreEmbedded) {
  for (const auto& id : TargetIds()) {
    const auto& t = FindTarget(id);
    EXPECT_FALSE(t.cfg_description.empty());
    for (const auto& f : t.source_files) EXPECT_FALSE(EmbeddedTargetFile(f).empty()) << f;
    EXPECT_EQ(t.entry_point, TargetCfgDescription(id).entry);
  }
  EXPECT_TRUE(EmbeddedTargetFile("nope.cc").empty());
}

TEST(AllTargets, HintsNameRealBranchesAndKnobs) {
  for (const auto& id : TargetIds()) {
    const auto& t = FindTarget(id);
    const auto& schema = SchemaFor(id);
    for (const auto& h : t.refine_hints) {
      EXPECT_TRUE(t.branches->Find(h.predicate_id, h.branch_line)) << h.predicate_id;
      for (const auto& tg : h.enable_toggles) EXPECT_TRUE(schema.toggles.count(tg)) << tg;
      if (!h.weight.empty()) EXPECT_TRUE(schema.weights.count(h.weight)) << h.weight;
    }
  }
}

TEST(TargetCfgs, MinilangAnalyzePlusPredicate) {
  const auto records = RankPredicates(TargetCfg("minilang").graph);
  const auto it = std::find_if(records.begin(), records.end(),
                               [](const StaticPredicateRecord& r) { return r.source_method == "analyzePlus" && r.line == 206; });
  ASSERT_NE(it, records.end());
  EXPECT_EQ(it->branches.size(), 2u);
}

TEST(TargetCfgs, JsonDepthGate) {
  const auto records = RankPredicates(TargetCfg("json").graph);
  EXPECT_TRUE(std::any_of(records.begin(), records.end(), [](const StaticPredicateRecord& r) {
    return r.source_method == "parseValue" && r.line == 30;
  }));
}

TEST(TargetCfgs, BzhHeaderRanksFirst) {
  const auto records = RankPredicates(TargetCfg("bzh").graph);
  ASSERT_FALSE(records.empty());
  EXPECT_EQ(records[0].source_method, "init");
  EXPECT_EQ(records[0].line, 101);
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].source_method != "init") EXPECT_GT(records[0].score, records[i].score);
  }
}

}  // namespace
}  // namespace predfuzz

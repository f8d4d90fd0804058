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
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "common/error.h"
#include "engine/engine.h"
#include "predicates/predicate_runtime.h"
#include "predicates/record_format.h"
#include "targets/target.h"

namespace predfuzz {
namespace {

PredicateMeta Meta(std::string id, int line, std::vector<int> branches) {
  return {std::move(id), "C", "m", line, std::move(branches)};
}

std::span<const std::uint8_t> AsBytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

const DynamicPredicateRecord& RecordFor(const DynamicPredicateReport& rep, const std::string& id) {
  const auto it = std::find_if(rep.records.begin(), rep.records.end(),
                               [&](const DynamicPredicateRecord& r) { return r.meta.predicate_id == id; });
  if (it == rep.records.end()) throw std::runtime_error("no record " + id);
  return *it;
}

TEST(Registry, EmptyRegistryEmptyReport) {
  const auto reg = RegisterPredicates("t", {});
  const auto rep = reg.EmitReport();
  EXPECT_TRUE(rep.records.empty());
  EXPECT_EQ(rep.total_saved_inputs, 0u);
}

TEST(Registry, DuplicateIdRejected) {
  try {
    RegisterPredicates("t", {Meta("p", 1, {2, 3}), Meta("p", 5, {6, 7})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicatePredicate);
  }
  try {
    BranchTable({Meta("p", 1, {2, 3}), Meta("p", 1, {2, 3})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicatePredicate);
  }
}

TEST(Registry, MinilangHasAnalyzePlus) {
  const auto& t = FindTarget("minilang");
  const auto& metas = t.predicate_metas();
  const auto it = std::find_if(metas.begin(), metas.end(), [](const PredicateMeta& m) {
    return m.source_method == "analyzePlus" && m.predicate_line == 206;
  });
  ASSERT_NE(it, metas.end());
  EXPECT_EQ(it->branch_lines, (std::vector<int>{207, 208}));
}

TEST(Trace, RepeatedHitsCountOnce) {
  const BranchTable table({Meta("p", 206, {207, 208})});
  auto reg = RegisterPredicates("t", table.metas());
  ExecutionTrace trace(table);
  for (int i = 0; i < 3; ++i) RecordBranch(trace, "p", 207);
  RecordBranch(trace, "unknown", 1);
  RecordBranch(trace, "p", 999);
  EXPECT_EQ(trace.hits().size(), 1u);
  reg.CommitSavedInput(trace);
  const auto rep = reg.EmitReport();
  const auto& r = RecordFor(rep, "p");
  EXPECT_EQ(r.predicate_inputs, 1u);
  EXPECT_EQ(r.branch_inputs, (std::vector<std::uint64_t>{1, 0}));
}

TEST(Trace, InputNotReachingPredicate) {
  const BranchTable table({Meta("p", 1, {2, 3}), Meta("q", 10, {11, 12})});
  auto reg = RegisterPredicates("t", table.metas());
  ExecutionTrace trace(table);
  RecordBranch(trace, "q", 12);
  reg.CommitSavedInput(trace);
  const auto rep = reg.EmitReport();
  EXPECT_EQ(RecordFor(rep, "p").predicate_inputs, 0u);
  EXPECT_EQ(RecordFor(rep, "q").predicate_inputs, 1u);
  EXPECT_EQ(rep.total_saved_inputs, 1u);
}

TEST(Trace, UncommittedTracesContributeNothing) {
  const BranchTable table({Meta("p", 1, {2, 3})});
  auto reg = RegisterPredicates("t", table.metas());
  ExecutionTrace trace(table);
  RecordBranch(trace, "p", 2);
  trace.Reset();
  EXPECT_TRUE(trace.hits().empty());
  const auto rep = reg.EmitReport();
  EXPECT_EQ(RecordFor(rep, "p").predicate_inputs, 0u);
  EXPECT_EQ(rep.total_saved_inputs, 0u);
}

TEST(Trace, BothPlusBranchesInOneProgram) {
  const auto& t = FindTarget("minilang");
  auto reg = RegisterPredicates("minilang", t.predicate_metas());
  ExecutionTrace trace(*t.branches);
  const std::string program = "x: int = 0\nx = 1 + 2\n[1, 2] + [\"hello\"]\n";
  const auto out = RunTarget(t, AsBytes(program), trace);
  reg.CommitSavedInput(trace);
  const auto rep = reg.EmitReport();
  const auto& r = RecordFor(rep, "minilang.TypeChecker.analyzePlus:206");
  EXPECT_EQ(r.predicate_inputs, 1u) << out.reason;
  EXPECT_EQ(r.branch_inputs, (std::vector<std::uint64_t>{1, 1}));
}

TEST(Trace, DistinctInputsAcrossCommits) {
  const auto& t = FindTarget("minilang");
  auto reg = RegisterPredicates("minilang", t.predicate_metas());
  ExecutionTrace trace(*t.branches);
  for (const std::string p : {"1 + 2\n", "3 + 4 + 5\n", "[1] + [\"a\"]\n"}) {
    RunTarget(t, AsBytes(p), trace);
    reg.CommitSavedInput(trace);
  }
  const auto rep = reg.EmitReport();
  const auto& r = RecordFor(rep, "minilang.TypeChecker.analyzePlus:206");
  EXPECT_EQ(r.predicate_inputs, 3u);
  EXPECT_EQ(r.branch_inputs, (std::vector<std::uint64_t>{2, 1}));
}

// Recount every branch from the replayed corpus traces and compare.
TEST(Report, MatchesOfflineRecount) {
  for (const char* target : {"json", "minilang", "bzh"}) {
    CampaignOptions o;
    o.target_id = target;
    o.config = BuiltinConfig(target, "structured");
    o.budget_execs = 3000;
    o.rng_seed = 12;
    const auto r = RunCampaign(o);
    const auto& t = FindTarget(target);
    std::map<std::pair<std::string, int>, std::uint64_t> branch_count;
    std::map<std::string, std::uint64_t> pred_count;
    for (const auto& e : r.corpus) {
      ParamStream s(e.stream_bytes, e.overflow_seed);
      const auto input = Generate(o.config, s);
      const auto out = RunTarget(t, input.payload);
      std::set<std::string> reached;
      for (BranchId id : out.branches_hit) {
        const auto [p, b] = t.branches->Locate(id);
        const auto& meta = t.branches->meta(p);
        ++branch_count[{meta.predicate_id, meta.branch_lines[b]}];
        reached.insert(meta.predicate_id);
      }
      for (const auto& id : reached) ++pred_count[id];
    }
    EXPECT_EQ(r.dynamic_report.total_saved_inputs, r.corpus.size());
    for (const auto& rec : r.dynamic_report.records) {
      EXPECT_EQ(rec.predicate_inputs, pred_count[rec.meta.predicate_id]) << rec.meta.predicate_id;
      for (std::size_t b = 0; b < rec.branch_inputs.size(); ++b) {
        EXPECT_EQ(rec.branch_inputs[b], (branch_count[{rec.meta.predicate_id, rec.meta.branch_lines[b]}]));
      }
    }
  }
}

TEST(Report, CountBounds) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 12; ++i) {
    const std::vector<std::string> targets = {"json", "minilang", "bzh"};
    CampaignOptions o;
    o.target_id = targets[rng() % 3];
    o.config = BuiltinConfig(o.target_id, rng() % 2 ? "naive" : "structured");
    o.mode = rng() % 2 ? FuzzMode::kGuided : FuzzMode::kRandom;
    o.budget_execs = 500 + rng() % 2000;
    o.rng_seed = rng();
    const auto r = RunCampaign(o);
    for (const auto& rec : r.dynamic_report.records) {
      std::uint64_t max = 0;
      std::uint64_t sum = 0;
      for (auto c : rec.branch_inputs) {
        max = std::max(max, c);
        sum += c;
      }
      EXPECT_LE(max, rec.predicate_inputs);
      EXPECT_LE(rec.predicate_inputs, sum);
      EXPECT_LE(rec.predicate_inputs, r.dynamic_report.total_saved_inputs);
    }
  }
}

// ---- record files ------------------------------------------------------------

StaticPredicateRecord AnalyzePlusStatic() {
  StaticPredicateRecord r;
  r.source_class = "...TypeChecker";
  r.source_method = "analyzePlus";
  r.line = 206;
  r.branches = {{"p", "b207", 207, 10}, {"p", "b208", 208, 40}};
  r.score = 40;
  return r;
}

DynamicPredicateRecord AnalyzePlusDynamic() {
  DynamicPredicateRecord r;
  r.meta = {"p", "...TypeChecker", "analyzePlus", 206, {207, 208}};
  r.predicate_inputs = 822;
  r.branch_inputs = {798, 24};
  return r;
}

constexpr char kStaticGolden[] =
    "{\n"
    "  \"class\": \"...TypeChecker\",\n"
    "  \"method\": \"analyzePlus\",\n"
    "  \"line\": 206,\n"
    "  \"branches\": [\n"
    "    { \"line\": 207, \"dominance\": 10 },\n"
    "    { \"line\": 208, \"dominance\": 40 }\n"
    "  ]\n"
    "}\n";

constexpr char kDynamicGolden[] =
    "{\n"
    "  \"class\": \"...TypeChecker\",\n"
    "  \"method\": \"analyzePlus\",\n"
    "  \"predicateLine\": 206,\n"
    "  \"predicateInputs\": 822,\n"
    "  \"branches\": [\n"
    "    { \"line\": 207, \"inputs\": 798 },\n"
    "    { \"line\": 208, \"inputs\": 24  }\n"
    "  ]\n"
    "}\n";

TEST(RecordFormat, StaticGolden) { EXPECT_EQ(FormatStaticRecord(AnalyzePlusStatic()), kStaticGolden); }

TEST(RecordFormat, DynamicGolden) { EXPECT_EQ(FormatDynamicRecord(AnalyzePlusDynamic()), kDynamicGolden); }

TEST(RecordFormat, StaticRoundTrip) {
  const auto parsed = ParseStaticRecords(kStaticGolden);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].score, 40u);
  EXPECT_EQ(parsed[0].branches[1].dominance, 40u);
  EXPECT_EQ(FormatStaticRecord(parsed[0]), kStaticGolden);
  const auto ranked = RankPredicates(TargetCfg("bzh").graph);
  EXPECT_EQ(FormatStaticRecords(ParseStaticRecords(FormatStaticRecords(ranked))), FormatStaticRecords(ranked));
}

TEST(RecordFormat, DynamicRoundTrip) {
  const auto parsed = ParseDynamicRecords(kDynamicGolden);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].meta.predicate_id, "...TypeChecker.analyzePlus:206");
  EXPECT_EQ(parsed[0].predicate_inputs, 822u);
  EXPECT_EQ(FormatDynamicRecord(parsed[0]), kDynamicGolden);
}

TEST(RecordFormat, MalformedRecords) {
  for (const char* bad : {"[", R"({"class": "C"})", R"({"class": "C", "method": "m", "line": 0, "branches": []})"}) {
    try {
      ParseStaticRecords(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError);
    }
  }
}

}  // namespace
}  // namespace predfuzz

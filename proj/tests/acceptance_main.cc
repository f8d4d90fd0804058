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

// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
//
//   acceptance                 run every criterion
//   acceptance 1 3 10          run the listed criteria
//   acceptance --gen-dump T    print hex payloads for the criterion 4 streams

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cfg/cfg.h"
#include "engine/engine.h"
#include "gen/generator.h"
#include "predicates/record_format.h"
#include "refine/refine.h"
#include "stats/stats.h"
#include "support/oracles.h"
#include "targets/target.h"

namespace predfuzz {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::vector<testing::SmallGraph> Graphs() {
  std::mt19937_64 rng(2024);
  std::vector<testing::SmallGraph> out;
  for (int i = 0; i < 200; ++i) out.push_back(testing::RandomGraph(rng, 12, 24, true));
  return out;
}

// ---- 1, 2: dominance ----------------------------------------------------------

Outcome Dominators() {
  const auto start = Clock::now();
  std::size_t mismatches = 0;
  std::size_t nodes = 0;
  for (const auto& g : Graphs()) {
    const auto cfg = testing::ToCfg(g);
    const auto tree = ComputeDominatorTree(cfg);
    const auto oracle = testing::OracleIdom(g);
    for (int n = 0; n < g.n; ++n, ++nodes) {
      const auto idom = tree.idom(cfg.IndexOf(testing::BlockId(n)));
      const std::optional<int> got =
          idom ? std::optional<int>(std::stoi(cfg.block(*idom).id.substr(1))) : std::nullopt;
      mismatches += got == oracle[static_cast<std::size_t>(n)] ? 0 : 1;
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return {mismatches == 0 && secs < 60,
          Fmt("200 graphs, %zu nodes, %zu mismatches, %.2f s", nodes, mismatches, secs)};
}

Outcome Scores() {
  std::size_t mismatches = 0;
  std::size_t branches = 0;
  for (const auto& g : Graphs()) {
    const auto cfg = testing::ToCfg(g);
    const auto tree = ComputeDominatorTree(cfg);
    for (int n = 0; n < g.n; ++n, ++branches) {
      const auto got = ScoreBranch(cfg, tree, cfg.IndexOf(testing::BlockId(n)));
      mismatches += got == testing::OracleScore(g, n) ? 0 : 1;
    }
  }
  return {mismatches == 0, Fmt("%zu branch outcomes, %zu mismatches", branches, mismatches)};
}

// ---- 3: record format ------------------------------------------------------------

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

Outcome RecordFormat() {
  StaticPredicateRecord s;
  s.source_class = "...TypeChecker";
  s.source_method = "analyzePlus";
  s.line = 206;
  s.branches = {{"", "", 207, 10}, {"", "", 208, 40}};
  s.score = 40;
  DynamicPredicateRecord d;
  d.meta = {"", "...TypeChecker", "analyzePlus", 206, {207, 208}};
  d.predicate_inputs = 822;
  d.branch_inputs = {798, 24};
  const bool static_ok = FormatStaticRecord(s) == kStaticGolden;
  const bool dynamic_ok = FormatDynamicRecord(d) == kDynamicGolden;
  const bool round_trip = FormatStaticRecord(ParseStaticRecords(kStaticGolden).at(0)) == kStaticGolden &&
                          FormatDynamicRecord(ParseDynamicRecords(kDynamicGolden).at(0)) == kDynamicGolden;
  return {static_ok && dynamic_ok && round_trip,
          Fmt("static %s, dynamic %s, round trip %s", static_ok ? "exact" : "DIFFERS",
              dynamic_ok ? "exact" : "DIFFERS", round_trip ? "exact" : "DIFFERS")};
}

// ---- 4: replay determinism ----------------------------------------------------------

std::string Hex(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 15];
  }
  return out;
}

std::string GenDump(const std::string& target) {
  const Generator gen(BuiltinConfig(target, "structured"));
  std::mt19937_64 rng(4000 + target.size());
  std::string out;
  for (int i = 0; i < 1000; ++i) {
    Bytes b(1 + rng() % 512);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    ParamStream s(b, rng());
    out += Hex(gen.Generate(s).payload);
    out += '\n';
  }
  return out;
}

std::string SelfPath() { return std::filesystem::read_symlink("/proc/self/exe").string(); }

std::optional<std::string> RunChild(const std::string& target) {
  const std::string cmd = SelfPath() + " --gen-dump " + target;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return std::nullopt;
  std::string out;
  char buf[65536];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int status = pclose(p);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return std::nullopt;
  return out;
}

Outcome ReplayDeterminism() {
  bool ok = true;
  std::string detail;
  for (const auto& target : TargetIds()) {
    const auto a = RunChild(target);
    const auto b = RunChild(target);
    const bool same = a && b && *a == *b && *a == GenDump(target);
    const auto lines = a ? std::count(a->begin(), a->end(), '\n') : 0;

    CampaignOptions o;
    o.target_id = target;
    o.config = BuiltinConfig(target, "structured");
    o.budget_execs = 5000;
    o.rng_seed = 44;
    const auto r = RunCampaign(o);
    const auto dir = std::filesystem::temp_directory_path() / ("predfuzz_acceptance_" + target);
    std::filesystem::remove_all(dir);
    WriteCampaign(r, o.config, dir);
    const auto loaded = LoadCampaignCorpus(dir);
    const auto from_disk = ReplayCorpus(target, loaded.config, loaded.entries);
    const auto in_memory = ReplayCorpus(target, o.config, r.corpus);
    std::filesystem::remove_all(dir);
    const bool replay_ok = from_disk.coverage == r.final_coverage && in_memory.coverage == r.final_coverage &&
                           loaded.errors.empty() && from_disk.errors.empty();
    ok = ok && same && replay_ok && lines == 1000;
    detail += Fmt("%s: %ld outputs %s, replay %zu/%zu branches; ", target.c_str(), static_cast<long>(lines),
                  same ? "identical" : "DIFFER", from_disk.coverage.size(), r.final_coverage.size());
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// ---- 5, 9: randomized campaigns ---------------------------------------------------------

std::vector<std::pair<CampaignOptions, CampaignResult>> RandomCampaigns() {
  static const auto campaigns = [] {
    std::vector<std::pair<CampaignOptions, CampaignResult>> out;
    std::mt19937_64 rng(909);
    const auto ids = TargetIds();
    for (int i = 0; i < 50; ++i) {
      CampaignOptions o;
      o.target_id = ids[rng() % ids.size()];
      o.config = BuiltinConfig(o.target_id, rng() % 2 ? "naive" : "structured");
      o.mode = rng() % 4 == 0 ? FuzzMode::kRandom : FuzzMode::kGuided;
      o.budget_execs = 500 + rng() % 4500;
      o.rng_seed = rng();
      out.emplace_back(o, RunCampaign(o));
    }
    return out;
  }();
  return campaigns;
}

Outcome SavingSoundness() {
  std::size_t entries = 0;
  std::size_t violations = 0;
  for (const auto& [o, r] : RandomCampaigns()) {
    std::set<BranchId> seen;
    for (const auto& e : r.corpus) {
      ++entries;
      bool ok = !e.new_branches.empty();
      for (BranchId b : e.new_branches) ok = ok && !seen.count(b);
      violations += ok ? 0 : 1;
      seen.insert(e.new_branches.begin(), e.new_branches.end());
    }
    violations += std::vector<BranchId>(seen.begin(), seen.end()) == r.final_coverage ? 0 : 1;
  }
  return {violations == 0, Fmt("50 campaigns, %zu corpus entries, %zu violations", entries, violations)};
}

Outcome CountConservation() {
  std::size_t records = 0;
  std::size_t violations = 0;
  for (const auto& [o, r] : RandomCampaigns()) {
    const std::uint64_t corpus = r.corpus.size();
    for (const auto& rec : r.dynamic_report.records) {
      ++records;
      std::uint64_t max = 0;
      std::uint64_t sum = 0;
      for (auto c : rec.branch_inputs) {
        max = std::max(max, c);
        sum += c;
      }
      const bool ok = max <= rec.predicate_inputs && rec.predicate_inputs <= sum &&
                      sum <= corpus * rec.branch_inputs.size() &&
                      rec.predicate_inputs <= r.dynamic_report.total_saved_inputs &&
                      r.dynamic_report.total_saved_inputs == corpus;
      violations += ok ? 0 : 1;
    }
  }
  return {violations == 0, Fmt("50 campaigns, %zu records, %zu violations", records, violations)};
}

// ---- 6, 7: guided vs random on bzh ----------------------------------------------------------

constexpr int kReps = 5;
constexpr double kRepSecs = 60;

struct ModeComparison {
  std::vector<double> guided;
  std::vector<double> random;
  double guided_mean = 0;
  double random_mean = 0;
  MwuResult test;
};

// All 2 * kReps campaigns run on concurrent threads.
ModeComparison CompareModes(const char* profile) {
  std::vector<CampaignOptions> opts;
  for (const auto mode : {FuzzMode::kGuided, FuzzMode::kRandom}) {
    for (int i = 0; i < kReps; ++i) {
      CampaignOptions o;
      o.target_id = "bzh";
      o.config = BuiltinConfig("bzh", profile);
      o.mode = mode;
      o.budget_secs = kRepSecs;
      o.rng_seed = 1000 + static_cast<std::uint64_t>(i);
      opts.push_back(o);
    }
  }
  std::vector<CampaignResult> results(opts.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < opts.size(); ++i) {
    threads.emplace_back([&, i] { results[i] = RunCampaign(opts[i]); });
  }
  for (auto& t : threads) t.join();
  ModeComparison c;
  for (std::size_t i = 0; i < results.size(); ++i) {
    (i < kReps ? c.guided : c.random).push_back(static_cast<double>(results[i].final_coverage.size()));
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  c.guided_mean = mean(c.guided);
  c.random_mean = mean(c.random);
  c.test = MannWhitneyU(c.guided, c.random);
  return c;
}

std::string Values(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += Fmt("%s%.0f", i ? " " : "", v[i]);
  return out + "]";
}

Outcome NaiveGuidanceHelps() {
  const auto c = CompareModes("naive");
  return {c.guided_mean > c.random_mean && c.test.p < kSignificanceLevel,
          Fmt("guided %s mean %.1f vs random %s mean %.1f, U=%.1f p=%.4f", Values(c.guided).c_str(), c.guided_mean,
              Values(c.random).c_str(), c.random_mean, c.test.u, c.test.p)};
}

Outcome StructuredGuidanceNeutral() {
  const auto c = CompareModes("structured");
  const double rel = c.random_mean > 0 ? std::fabs(c.guided_mean - c.random_mean) / c.random_mean : 0;
  return {rel < 0.05 && c.test.p >= kSignificanceLevel,
          Fmt("guided %s mean %.1f vs random %s mean %.1f, diff %.2f%%, U=%.1f p=%.4f", Values(c.guided).c_str(),
              c.guided_mean, Values(c.random).c_str(), c.random_mean, rel * 100, c.test.u, c.test.p)};
}

// ---- 8: refinement on minilang ------------------------------------------------------------

Outcome RefineReachesOverride() {
  auto start = BuiltinConfig("minilang", "structured");
  start.toggles["mismatch_signature"] = false;
  auto state = MakeRefineState(start, FeedbackMode::kStatic);
  RefineLoopOptions o;
  o.max_iterations = 10;
  o.budget = {20000, 0, 8, FuzzMode::kGuided};
  const auto loop = RunRefineLoop(state, MakeScriptedRefiner(), o);
  const auto& target = FindTarget("minilang");
  const auto id = target.branches->Find("minilang.DeclarationAnalyzer.analyzeMethod:305", 306);
  int reached = 0;
  std::string series;
  for (const auto& cp : state.checkpoints) {
    std::uint64_t inputs = 0;
    for (const auto& r : cp.campaign.dynamic_report.records) {
      if (r.meta.predicate_id != "minilang.DeclarationAnalyzer.analyzeMethod:305") continue;
      const auto it = std::find(r.meta.branch_lines.begin(), r.meta.branch_lines.end(), 306);
      inputs = r.branch_inputs[static_cast<std::size_t>(it - r.meta.branch_lines.begin())];
    }
    series += Fmt("%s%d: cov %zu ratio %.4f inputs306 %llu", series.empty() ? "" : "; ", cp.iteration,
                  cp.campaign.final_coverage.size(), cp.coverage_ratio_vs_iter1,
                  static_cast<unsigned long long>(inputs));
    if (!reached && cp.iteration <= 3 && inputs > 0 && cp.coverage_ratio_vs_iter1 > 1.0) reached = cp.iteration;
  }
  const bool ok = id.has_value() && reached > 0 && loop.reached_fixpoint && loop.fixpoint_iteration <= 10;
  return {ok, Fmt("%s; reached at iteration %d, fixpoint %s at %d", series.c_str(), reached,
                  loop.reached_fixpoint ? "yes" : "no", loop.fixpoint_iteration)};
}

// ---- 10: exact MWU ------------------------------------------------------------------------

Outcome MwuExactness() {
  const std::vector<double> pool = {1, 2, 3, 3, 5, 8, 8, 13};
  std::mt19937_64 rng(10);
  std::size_t checks = 0;
  double worst = 0;
  const std::pair<Alternative, const char*> alts[] = {
      {Alternative::kTwoSided, "two-sided"}, {Alternative::kGreater, "greater"}, {Alternative::kLess, "less"}};
  for (std::size_t nx = 1; nx <= 4; ++nx) {
    for (std::size_t ny = 1; ny <= 4; ++ny) {
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> xs(nx);
        std::vector<double> ys(ny);
        for (auto& v : xs) v = pool[rng() % pool.size()];
        for (auto& v : ys) v = pool[rng() % pool.size()];
        for (const auto& [alt, name] : alts) {
          const auto r = MannWhitneyU(xs, ys, alt);
          const double diff = std::fabs(r.p - testing::PermutationP(xs, ys, name));
          worst = std::max(worst, r.exact ? diff : 1.0);
          ++checks;
        }
      }
    }
  }
  return {worst <= 1e-12, Fmt("16 size pairs, %zu p-values, max |p - oracle| = %.3g", checks, worst)};
}

// ---- 11: throughput -------------------------------------------------------------------------

Outcome Throughput() {
  CampaignOptions o;
  o.target_id = "json";
  o.config = BuiltinConfig("json", "structured");
  o.budget_secs = 10;
  o.rng_seed = 11;
  const auto before = TargetInvocations("json");
  const auto start = Clock::now();
  const auto r = RunCampaign(o);
  const double outer = std::chrono::duration<double>(Clock::now() - start).count();
  const auto invocations = TargetInvocations("json") - before;
  const double expected = static_cast<double>(r.executions) / outer;
  const double rel = std::fabs(r.inputs_per_sec - expected) / expected;
  const double internal = std::fabs(r.inputs_per_sec * r.duration_secs - static_cast<double>(r.executions)) /
                          static_cast<double>(r.executions);
  return {rel < 0.01 && internal < 1e-9 && invocations == r.executions,
          Fmt("%llu executions, %llu invocations, %.1f inputs/s reported vs %.1f measured (%.3f%%)",
              static_cast<unsigned long long>(r.executions), static_cast<unsigned long long>(invocations),
              r.inputs_per_sec, expected, rel * 100)};
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> run;
};

int Main(int argc, char** argv) {
  if (argc == 3 && std::strcmp(argv[1], "--gen-dump") == 0) {
    std::cout << GenDump(argv[2]);
    return 0;
  }
  const std::vector<Criterion> all = {
      {1, "dominator correctness", Dominators},
      {2, "dominance-score correctness", Scores},
      {3, "record-format fidelity", RecordFormat},
      {4, "replay determinism", ReplayDeterminism},
      {5, "saving-criterion soundness", SavingSoundness},
      {6, "bzh naive: guided beats random", NaiveGuidanceHelps},
      {7, "bzh structured: guided matches random", StructuredGuidanceNeutral},
      {8, "minilang refinement reaches override branch", RefineReachesOverride},
      {9, "predicate-count conservation", CountConservation},
      {10, "MWU exactness", MwuExactness},
      {11, "throughput accounting", Throughput},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.number)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    failed += o.pass ? 0 : 1;
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.number, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace predfuzz

int main(int argc, char** argv) { return predfuzz::Main(argc, argv); }

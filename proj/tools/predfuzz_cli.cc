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

// predfuzz command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "predfuzz/predfuzz.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Thrown for runtime failures; main prints it and exits 1.
struct Failure {
  std::string message;
};

void Check(pf_status status, const std::string& what) {
  if (status != PF_OK) throw Failure{what + ": " + pf_last_error()};
}

struct StrDeleter {
  void operator()(char* s) const { pf_string_free(s); }
};
using Str = std::unique_ptr<char, StrDeleter>;

struct ConfigDeleter {
  void operator()(pf_config* c) const { pf_config_free(c); }
};
using Config = std::unique_ptr<pf_config, ConfigDeleter>;

struct CampaignDeleter {
  void operator()(pf_campaign* c) const { pf_campaign_free(c); }
};
using Campaign = std::unique_ptr<pf_campaign, CampaignDeleter>;

struct RefineDeleter {
  void operator()(pf_refine* r) const { pf_refine_free(r); }
};
using Refine = std::unique_ptr<pf_refine, RefineDeleter>;

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Failure{"cannot write " + path.string()};
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot read " + path.string()};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --target/--profile/--config shared by several subcommands.
struct ConfigFlags {
  std::string target;
  std::string profile = "structured";
  std::string config_path;

  void Add(CLI::App* cmd) {
    cmd->add_option("--target", target, "Target id (bzh, json, minilang)");
    cmd->add_option("--profile", profile, "Shipped generator profile (naive, structured)")
        ->check(CLI::IsMember({"naive", "structured"}));
    cmd->add_option("--config", config_path, "Generator config file; overrides --target/--profile")
        ->check(CLI::ExistingFile);
  }

  Config Load() const {
    pf_config* c = nullptr;
    if (!config_path.empty()) {
      Check(pf_config_load_file(config_path.c_str(), &c), "loading " + config_path);
      if (!target.empty() && target != pf_config_target(c)) {
        pf_config_free(c);
        throw Failure{"config " + config_path + " is for target " + pf_config_target(c)};
      }
    } else {
      Check(pf_config_builtin(target.c_str(), profile.c_str(), &c), "profile " + target + "/" + profile);
    }
    return Config(c);
  }
};

struct BudgetFlags {
  uint64_t execs = 0;
  double secs = 0;
  uint64_t seed = 0;

  void Add(CLI::App* cmd) {
    cmd->add_option("--budget-execs", execs, "Stop after this many executions");
    cmd->add_option("--budget-secs", secs, "Stop after this many seconds")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", seed, "RNG seed");
  }
};

void PrintCampaign(const char* label, const pf_campaign* c) {
  std::printf("%s executions=%llu coverage=%zu saved=%zu duration=%.3fs inputs/sec=%.1f\n", label,
              static_cast<unsigned long long>(pf_campaign_executions(c)), pf_campaign_coverage(c),
              pf_campaign_corpus_size(c), pf_campaign_duration(c), pf_campaign_inputs_per_sec(c));
}

// ---- subcommands -------------------------------------------------------------

int Analyze(const std::string& target, const std::string& out, int top) {
  char* raw = nullptr;
  Check(pf_analyze(target.c_str(), &raw), "analyze " + target);
  Str records(raw);
  if (out.empty()) {
    std::fputs(records.get(), stdout);
  } else {
    WriteFile(out, records.get());
    const auto parsed = nlohmann::json::parse(records.get());
    std::printf("%zu predicates written to %s\n", parsed.size(), out.c_str());
    for (int i = 0; i < top && i < static_cast<int>(parsed.size()); ++i) {
      const auto& r = parsed[static_cast<std::size_t>(i)];
      int score = 0;
      for (const auto& b : r["branches"]) score = std::max(score, b["dominance"].get<int>());
      std::printf("  %d. %s.%s:%d score %d\n", i + 1, r["class"].get<std::string>().c_str(),
                  r["method"].get<std::string>().c_str(), r["line"].get<int>(), score);
    }
  }
  return kExitOk;
}

struct FuzzArgs {
  ConfigFlags config;
  BudgetFlags budget;
  std::string mode = "guided";
  std::string out;
  uint64_t max_input_size = 4096;
  int favored_multiplier = 3;
  uint64_t sample_every = 100;
};

int Fuzz(const FuzzArgs& a) {
  Config config = a.config.Load();
  pf_campaign_options o;
  pf_campaign_options_init(&o);
  o.mode = a.mode.c_str();
  o.budget_execs = a.budget.execs;
  o.budget_secs = a.budget.secs;
  o.seed = a.budget.seed;
  o.max_input_size = a.max_input_size;
  o.favored_multiplier = a.favored_multiplier;
  o.sample_every = a.sample_every;
  pf_campaign* raw = nullptr;
  Check(pf_campaign_run(config.get(), &o, &raw), "campaign");
  Campaign c(raw);
  const std::string label = std::string(pf_config_target(config.get())) + " " + a.mode;
  PrintCampaign(label.c_str(), c.get());
  if (!a.out.empty()) {
    Check(pf_campaign_write(c.get(), a.out.c_str()), "writing " + a.out);
    std::printf("campaign written to %s\n", a.out.c_str());
  }
  return kExitOk;
}

int Replay(const std::string& dir, const std::string& payloads, const std::string& json_out) {
  char* raw = nullptr;
  Check(pf_replay_dir(dir.c_str(), payloads.empty() ? nullptr : payloads.c_str(), &raw), "replay " + dir);
  Str result(raw);
  if (!json_out.empty()) WriteFile(json_out, result.get());
  const auto j = nlohmann::json::parse(result.get());
  std::printf("replayed %zu of %zu entries, coverage %zu", j["replayed"].get<std::size_t>(),
              j["entries"].get<std::size_t>(), j["coverage"].get<std::size_t>());
  bool ok = j["errors"].empty() && j["digest_mismatches"].get<std::size_t>() == 0;
  if (j.contains("coverage_matches")) {
    const bool match = j["coverage_matches"].get<bool>();
    std::printf(" (recorded %zu, %s)", j["recorded_coverage"].get<std::size_t>(), match ? "match" : "MISMATCH");
    ok = ok && match;
  }
  std::printf("\n");
  for (const auto& e : j["errors"]) std::fprintf(stderr, "warning: %s\n", e.get<std::string>().c_str());
  if (j["digest_mismatches"].get<std::size_t>() > 0) {
    std::fprintf(stderr, "%zu decoded payloads differ from the recorded digests\n",
                 j["digest_mismatches"].get<std::size_t>());
  }
  if (!payloads.empty()) std::printf("decoded inputs written to %s\n", payloads.c_str());
  return ok ? kExitOk : kExitRuntime;
}

struct RefineArgs {
  ConfigFlags config;
  BudgetFlags budget;
  std::string mode = "guided";
  std::string feedback = "static";
  std::string refiner;
  int timeout_ms = 30000;
  double threshold = 0.05;
  int iterations = 10;
  std::string out;
};

int RefineCmd(RefineArgs a) {
  Config config = a.config.Load();
  if (a.refiner.empty()) {
    if (const char* env = std::getenv("PREDFUZZ_REFINER_ENDPOINT")) a.refiner = env;
  }
  if (a.refiner.empty()) a.refiner = "scripted";
  pf_refine_options o;
  pf_refine_options_init(&o);
  o.feedback = a.feedback.c_str();
  o.endpoint = a.refiner == "scripted" ? nullptr : a.refiner.c_str();
  o.timeout_ms = a.timeout_ms;
  o.threshold = a.threshold;
  o.max_iterations = a.iterations;
  o.session.mode = a.mode.c_str();
  o.session.budget_execs = a.budget.execs;
  o.session.budget_secs = a.budget.secs;
  o.session.seed = a.budget.seed;
  if (o.session.budget_execs == 0 && o.session.budget_secs == 0) o.session.budget_execs = 20000;
  o.checkpoint_dir = a.out.empty() ? nullptr : a.out.c_str();

  pf_refine* raw = nullptr;
  Check(pf_refine_run(config.get(), &o, &raw), "refine");
  Refine r(raw);
  char* s = nullptr;
  Check(pf_refine_log_json(r.get(), &s), "refine log");
  Str log(s);
  Check(pf_refine_series_json(r.get(), &s), "refine series");
  Str series(s);

  const auto lj = nlohmann::json::parse(log.get());
  const auto sj = nlohmann::json::parse(series.get());
  for (const auto& w : lj["warnings"]) std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
  std::printf("refiner %s, feedback %s\n", a.refiner.c_str(), lj["feedback_mode"].get<std::string>().c_str());
  for (std::size_t i = 0; i < sj.size(); ++i) {
    std::printf("  iteration %d: coverage %zu, ratio %.4f%s; %s\n", sj[i]["iteration"].get<int>(),
                sj[i]["coverage"].get<std::size_t>(), sj[i]["ratio"].get<double>(),
                sj[i]["failed"].get<bool>() ? " (campaign failed)" : "",
                lj["steps"][i]["note"].get<std::string>().c_str());
  }
  if (lj["reached_fixpoint"].get<bool>()) {
    std::printf("fixpoint at iteration %d\n", lj["fixpoint_iteration"].get<int>());
  } else {
    std::printf("no fixpoint within %d iterations\n", a.iterations);
  }
  if (!a.out.empty()) {
    WriteFile(fs::path(a.out) / "refine_log.json", log.get());
    std::printf("checkpoints written to %s\n", a.out.c_str());
  }
  return kExitOk;
}

// "name=path[,path...]" where each path is a summary.json or a campaign dir.
std::pair<std::string, std::vector<fs::path>> ParseArm(const std::string& arm_arg) {
  const auto eq = arm_arg.find('=');
  if (eq == std::string::npos || eq == 0) throw Failure{"--arm expects NAME=PATH[,PATH...]: " + arm_arg};
  std::vector<fs::path> paths;
  std::stringstream ss(arm_arg.substr(eq + 1));
  for (std::string p; std::getline(ss, p, ',');) {
    if (!p.empty()) paths.emplace_back(p);
  }
  return {arm_arg.substr(0, eq), paths};
}

int Report(const std::vector<std::string>& arm_args, const std::string& baseline, const std::string& alternative,
           std::string benchmark, const std::string& out) {
  nlohmann::json arms = nlohmann::json::object();
  for (const auto& arm_arg : arm_args) {
    auto [name, paths] = ParseArm(arm_arg);
    auto& values = arms[name];
    if (values.is_null()) values = nlohmann::json::array();
    for (auto p : paths) {
      if (fs::is_directory(p)) p /= "summary.json";
      nlohmann::json summary;
      try {
        summary = nlohmann::json::parse(ReadFile(p));
        values.push_back(summary.at("final_coverage").get<double>());
      } catch (const nlohmann::json::exception& e) {
        throw Failure{p.string() + ": " + e.what()};
      }
      const auto target = summary.value("target", "");
      if (benchmark.empty()) benchmark = target;
    }
  }
  char* js = nullptr;
  char* txt = nullptr;
  Check(pf_compare_arms(benchmark.c_str(), arms.dump().c_str(), baseline.c_str(), alternative.c_str(), &js, &txt),
        "report");
  Str json(js);
  Str text(txt);
  std::fputs(text.get(), stdout);
  if (!out.empty()) WriteFile(out, json.get());
  return kExitOk;
}

struct CompareArgs {
  ConfigFlags config;
  BudgetFlags budget;
  int reps = 5;
  std::string alternative = "two-sided";
  std::string out;
};

int CompareModes(const CompareArgs& a) {
  Config config = a.config.Load();
  const char* modes[] = {"guided", "random"};
  std::vector<pf_campaign_options> opts;
  for (const char* mode : modes) {
    for (int i = 0; i < a.reps; ++i) {
      pf_campaign_options o;
      pf_campaign_options_init(&o);
      o.mode = mode;
      o.budget_execs = a.budget.execs;
      o.budget_secs = a.budget.secs;
      o.seed = a.budget.seed + static_cast<uint64_t>(i);
      opts.push_back(o);
    }
  }
  std::vector<pf_campaign*> raw(opts.size(), nullptr);
  std::printf("running %zu campaigns concurrently\n", opts.size());
  std::fflush(stdout);
  Check(pf_campaign_run_many(config.get(), opts.data(), opts.size(), raw.data()), "campaigns");
  std::vector<Campaign> campaigns;
  for (auto* c : raw) campaigns.emplace_back(c);

  nlohmann::json arms = nlohmann::json::object();
  for (std::size_t i = 0; i < campaigns.size(); ++i) {
    const std::string mode = opts[i].mode;
    const int rep = static_cast<int>(i % static_cast<std::size_t>(a.reps));
    const std::string label = mode + " rep " + std::to_string(rep);
    PrintCampaign(label.c_str(), campaigns[i].get());
    arms[mode].push_back(static_cast<double>(pf_campaign_coverage(campaigns[i].get())));
    if (!a.out.empty()) {
      const auto dir = fs::path(a.out) / mode / ("rep_" + std::to_string(rep));
      Check(pf_campaign_write(campaigns[i].get(), dir.string().c_str()), "writing " + dir.string());
    }
  }
  char* js = nullptr;
  char* txt = nullptr;
  Check(pf_compare_arms(pf_config_target(config.get()), arms.dump().c_str(), "random", a.alternative.c_str(), &js,
                        &txt),
        "report");
  Str json(js);
  Str text(txt);
  std::fputs(text.get(), stdout);
  if (!a.out.empty()) WriteFile(fs::path(a.out) / "report.json", json.get());
  return kExitOk;
}

bool NeedsTarget(const ConfigFlags& c) { return c.target.empty() && c.config_path.empty(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predicate-guided parametric fuzzing toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pf_version()));

  std::string analyze_target, analyze_out;
  int analyze_top = 5;
  auto* analyze = app.add_subcommand("analyze", "Emit ranked static predicate records for a target");
  analyze->add_option("--target", analyze_target, "Target id")->required();
  analyze->add_option("--out", analyze_out, "Records file (default: standard output)");
  analyze->add_option("--top", analyze_top, "Predicates to list when writing a file");

  FuzzArgs fuzz_args;
  auto* fuzz = app.add_subcommand("fuzz", "Run one campaign");
  fuzz_args.config.Add(fuzz);
  fuzz_args.budget.Add(fuzz);
  fuzz->add_option("--mode", fuzz_args.mode, "guided or random")->check(CLI::IsMember({"guided", "random"}));
  fuzz->add_option("--out", fuzz_args.out, "Campaign output directory");
  fuzz->add_option("--max-input-size", fuzz_args.max_input_size, "Largest mutated stream in bytes")
      ->check(CLI::PositiveNumber);
  fuzz->add_option("--favored-multiplier", fuzz_args.favored_multiplier, "Selections per visit of a favored seed")
      ->check(CLI::PositiveNumber);
  fuzz->add_option("--sample-every", fuzz_args.sample_every, "Executions between coverage samples")
      ->check(CLI::PositiveNumber);

  std::string replay_dir, replay_payloads, replay_json;
  auto* replay = app.add_subcommand("replay", "Replay a campaign corpus and decode its inputs");
  replay->add_option("--dir", replay_dir, "Campaign directory")->required()->check(CLI::ExistingDirectory);
  replay->add_option("--payloads", replay_payloads, "Directory for decoded inputs");
  replay->add_option("--json", replay_json, "Replay result file");

  RefineArgs refine_args;
  auto* refine = app.add_subcommand("refine", "Run the generator refinement loop");
  refine_args.config.Add(refine);
  refine_args.budget.Add(refine);
  refine->add_option("--mode", refine_args.mode, "Campaign mode per iteration")
      ->check(CLI::IsMember({"guided", "random"}));
  refine->add_option("--feedback", refine_args.feedback, "base, static or llm")
      ->check(CLI::IsMember({"base", "static", "llm"}));
  refine->add_option("--refiner", refine_args.refiner,
                     "\"scripted\" or an http:// endpoint (default: $PREDFUZZ_REFINER_ENDPOINT, else scripted)");
  refine->add_option("--timeout-ms", refine_args.timeout_ms, "Refiner request timeout")->check(CLI::PositiveNumber);
  refine->add_option("--threshold", refine_args.threshold, "Underserved-branch ratio for the scripted refiner")
      ->check(CLI::Range(0.0, 1.0));
  refine->add_option("--iterations", refine_args.iterations, "Maximum iterations")->check(CLI::PositiveNumber);
  refine->add_option("--out", refine_args.out, "Checkpoint directory");

  std::vector<std::string> report_arms;
  std::string report_baseline, report_alternative = "two-sided", report_benchmark, report_out;
  auto* report = app.add_subcommand("report", "Compare arms of campaign summaries");
  report->add_option("--arm", report_arms, "NAME=PATH[,PATH...] (summary.json files or campaign dirs)")
      ->required();
  report->add_option("--baseline", report_baseline, "Baseline arm name")->required();
  report->add_option("--alternative", report_alternative, "two-sided, greater or less")
      ->check(CLI::IsMember({"two-sided", "greater", "less"}));
  report->add_option("--benchmark", report_benchmark, "Benchmark name (default: target of the first summary)");
  report->add_option("--out", report_out, "Report file");

  CompareArgs compare_args;
  auto* compare = app.add_subcommand("compare-modes", "Guided vs random repetitions with a significance test");
  compare_args.config.Add(compare);
  compare_args.budget.Add(compare);
  compare->add_option("--reps", compare_args.reps, "Repetitions per mode")->check(CLI::PositiveNumber);
  compare->add_option("--alternative", compare_args.alternative, "two-sided, greater or less")
      ->check(CLI::IsMember({"two-sided", "greater", "less"}));
  compare->add_option("--out", compare_args.out, "Output directory");

  try {
    app.parse(argc, argv);
    auto usage_error = [&](CLI::App* cmd, const std::string& msg) {
      std::cerr << msg << "\n" << cmd->help();
      return kExitUsage;
    };
    if (*fuzz || *refine || *compare) {
      CLI::App* cmd = *fuzz ? fuzz : *refine ? refine : compare;
      const ConfigFlags& cf = *fuzz ? fuzz_args.config : *refine ? refine_args.config : compare_args.config;
      if (NeedsTarget(cf)) return usage_error(cmd, "--target or --config is required");
    }
    if (*fuzz && fuzz_args.budget.execs == 0 && fuzz_args.budget.secs == 0) {
      return usage_error(fuzz, "--budget-execs or --budget-secs is required");
    }
    if (*compare && compare_args.budget.execs == 0 && compare_args.budget.secs == 0) {
      return usage_error(compare, "--budget-execs or --budget-secs is required");
    }

    if (*analyze) return Analyze(analyze_target, analyze_out, analyze_top);
    if (*fuzz) return Fuzz(fuzz_args);
    if (*replay) return Replay(replay_dir, replay_payloads, replay_json);
    if (*refine) return RefineCmd(refine_args);
    if (*report) return Report(report_arms, report_baseline, report_alternative, report_benchmark, report_out);
    if (*compare) return CompareModes(compare_args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

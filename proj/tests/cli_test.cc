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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
};

Result Cli(const std::string& args) {
  const std::string cmd = std::string(PREDFUZZ_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("predfuzz_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("frobnicate").code, 2);
  EXPECT_EQ(Cli("fuzz --target json").code, 2);
  EXPECT_EQ(Cli("fuzz --target json --budget-execs 10 --mode sideways").code, 2);
  EXPECT_EQ(Cli("analyze").code, 2);
  EXPECT_EQ(Cli("--help").code, 0);
}

TEST_F(CliTest, RuntimeFailuresExitOne) {
  const auto r = Cli("fuzz --target nope --budget-execs 10 --out " + Path("x"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("TargetNotFound"), std::string::npos) << r.out;
  EXPECT_EQ(Cli("replay --dir " + Path("missing")).code, 2);
  std::ofstream(Path("bad.json")) << R"({"target_id": "json", "toggles": {"warp": true}})";
  EXPECT_EQ(Cli("fuzz --config " + Path("bad.json") + " --budget-execs 10 --out " + Path("y")).code, 1);
}

TEST_F(CliTest, AnalyzeRanksHeaderGateFirst) {
  const auto r = Cli("analyze --target bzh --out " + Path("records.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(Slurp(Path("records.json")));
  ASSERT_FALSE(j.empty());
  EXPECT_EQ(j[0].at("method"), "init");
  EXPECT_EQ(j[0].at("line"), 101);
}

TEST_F(CliTest, FuzzIsReproducible) {
  const std::string args = "fuzz --target json --profile structured --mode random --budget-execs 1000 --seed 7 --out ";
  ASSERT_EQ(Cli(args + Path("a")).code, 0);
  ASSERT_EQ(Cli(args + Path("b")).code, 0);
  EXPECT_EQ(Slurp(Path("a/summary.json")), Slurp(Path("b/summary.json")));
  EXPECT_EQ(Slurp(Path("a/predicates.json")), Slurp(Path("b/predicates.json")));
  EXPECT_EQ(Slurp(Path("a/config.json")), Slurp(Path("b/config.json")));
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(Path("a/corpus"))) {
    ++files;
    EXPECT_EQ(Slurp(e.path()), Slurp(Path("b/corpus") + "/" + e.path().filename().string()));
  }
  EXPECT_EQ(files, json::parse(Slurp(Path("a/summary.json"))).at("saved_inputs").get<std::size_t>());
}

TEST_F(CliTest, ReplayMatchesAndDetectsTampering) {
  ASSERT_EQ(Cli("fuzz --target minilang --budget-execs 800 --seed 3 --out " + Path("c")).code, 0);
  const auto ok = Cli("replay --dir " + Path("c") + " --payloads " + Path("p") + " --json " + Path("replay.json"));
  ASSERT_EQ(ok.code, 0) << ok.out;
  EXPECT_TRUE(json::parse(Slurp(Path("replay.json"))).at("coverage_matches").get<bool>());
  EXPECT_FALSE(fs::is_empty(Path("p")));

  auto summary = json::parse(Slurp(Path("c/summary.json")));
  summary["final_coverage"] = summary.at("final_coverage").get<int>() + 1;
  std::ofstream(Path("c/summary.json")) << summary.dump(2);
  EXPECT_EQ(Cli("replay --dir " + Path("c")).code, 1);

  summary["final_coverage"] = summary.at("final_coverage").get<int>() - 1;
  summary["covered_branches"].erase(summary["covered_branches"].begin());
  std::ofstream(Path("c/summary.json")) << summary.dump(2);
  EXPECT_EQ(Cli("replay --dir " + Path("c")).code, 1);
}

TEST_F(CliTest, ReportOverSummaries) {
  for (const char* mode : {"guided", "random"}) {
    for (int seed = 1; seed <= 2; ++seed) {
      const std::string out = Path(std::string(mode) + std::to_string(seed));
      ASSERT_EQ(Cli("fuzz --target json --profile naive --budget-execs 500 --mode " + std::string(mode) +
                    " --seed " + std::to_string(seed) + " --out " + out)
                    .code,
                0);
    }
  }
  const auto r = Cli("report --arm guided=" + Path("guided1") + "," + Path("guided2") + " --arm random=" +
                     Path("random1") + "," + Path("random2") + " --baseline random --out " + Path("report.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(Slurp(Path("report.json")));
  EXPECT_EQ(j.at("baseline"), "random");
  EXPECT_EQ(j.at("benchmark"), "json");
  EXPECT_EQ(Cli("report --arm a=" + Path("guided1") + " --baseline b").code, 1);
}

TEST_F(CliTest, RefineWritesLogAndSeries) {
  const auto r = Cli("refine --target minilang --iterations 2 --budget-execs 600 --seed 1 --out " + Path("r"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto log = json::parse(Slurp(Path("r/refine_log.json")));
  EXPECT_EQ(log.at("feedback_mode"), "static");
  const auto series = json::parse(Slurp(Path("r/series.json")));
  ASSERT_FALSE(series.empty());
  EXPECT_EQ(series[0].at("ratio"), 1.0);
}

TEST_F(CliTest, CompareModesWritesReport) {
  const auto r =
      Cli("compare-modes --target bzh --profile naive --reps 2 --budget-execs 400 --seed 5 --out " + Path("cm"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(Slurp(Path("cm/report.json")));
  EXPECT_EQ(j.at("arms").size(), 2u);
  EXPECT_TRUE(fs::exists(Path("cm/guided/rep_0/summary.json")));
  EXPECT_TRUE(fs::exists(Path("cm/random/rep_1/summary.json")));
}

}  // namespace

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

#ifndef PREDFUZZ_STATS_STATS_H_
#define PREDFUZZ_STATS_STATS_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "engine/engine.h"

namespace predfuzz {

// The alternative is about xs relative to ys: kGreater tests whether xs tend
// to be larger.
enum class Alternative { kTwoSided, kGreater, kLess };
std::string_view AlternativeName(Alternative alt);
// Throws kInvalidArgument.
Alternative ParseAlternative(std::string_view name);

inline constexpr std::size_t kExactMwuLimit = 64;  // |xs| * |ys|

struct MwuResult {
  double u = 0;  // U of xs: rank sum of xs minus |xs|(|xs|+1)/2, midranks for ties
  double p = 1;
  bool exact = false;
};

// Exact p by enumerating every split of the pooled sample when
// |xs| * |ys| <= kExactMwuLimit, otherwise the normal approximation with tie
// and continuity correction. Throws kEmptySample.
MwuResult MannWhitneyU(std::span<const double> xs, std::span<const double> ys,
                       Alternative alt = Alternative::kTwoSided);

inline constexpr double kSignificanceLevel = 0.05;

struct ArmSummary {
  std::string name;
  std::vector<double> values;
  double mean = 0;
  double normalized = 1;  // mean / baseline mean; 0/0 is 1
};

struct ArmComparison {
  std::string arm;
  std::string baseline;
  MwuResult test;
  bool significant = false;  // p < alpha with >= 2 repetitions on both sides
};

struct ComparisonReport {
  std::string benchmark;
  std::string baseline;
  Alternative alternative = Alternative::kTwoSided;
  double alpha = kSignificanceLevel;
  std::vector<ArmSummary> arms;  // baseline first, then by name
  std::vector<ArmComparison> pairs;
};

// Throws kBaselineNotFound, kEmptySample.
ComparisonReport CompareArms(std::string_view benchmark,
                             const std::map<std::string, std::vector<double>>& arms,
                             std::string_view baseline, Alternative alt = Alternative::kTwoSided,
                             double alpha = kSignificanceLevel);
// Uses each campaign's final coverage as the arm value.
ComparisonReport CompareArms(std::string_view benchmark,
                             const std::map<std::string, std::vector<CampaignResult>>& arms,
                             std::string_view baseline, Alternative alt = Alternative::kTwoSided,
                             double alpha = kSignificanceLevel);

std::string ComparisonReportJson(const ComparisonReport& report);
std::string ComparisonReportText(const ComparisonReport& report);

}  // namespace predfuzz

#endif  // PREDFUZZ_STATS_STATS_H_

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

#include "stats/stats.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "common/error.h"

namespace predfuzz {
namespace {

// Midranks of the pooled sample, doubled so they are integers.
std::vector<std::int64_t> DoubledMidranks(const std::vector<double>& pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  std::vector<std::int64_t> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // Ranks i+1..j+1 share their mean; doubled that is i+j+2.
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = static_cast<std::int64_t>(i + j + 2);
    i = j + 1;
  }
  return ranks;
}

double TieSum(std::vector<double> pooled) {
  std::sort(pooled.begin(), pooled.end());
  double sum = 0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    const double t = static_cast<double>(j - i);
    sum += t * t * t - t;
    i = j;
  }
  return sum;
}

double ExactP(const std::vector<std::int64_t>& ranks, std::size_t n, std::int64_t observed2,
              Alternative alt) {
  // counts[k][s]: subsets of size k whose doubled rank sum is s.
  const std::int64_t total = std::accumulate(ranks.begin(), ranks.end(), std::int64_t{0});
  std::vector<std::vector<std::uint64_t>> counts(n + 1, std::vector<std::uint64_t>(total + 1, 0));
  counts[0][0] = 1;
  for (std::int64_t r : ranks) {
    for (std::size_t k = n; k >= 1; --k) {
      for (std::int64_t s = total; s >= r; --s) counts[k][s] += counts[k - 1][s - r];
    }
  }
  const auto m = ranks.size() - n;
  const std::int64_t offset = static_cast<std::int64_t>(n * (n + 1));  // doubled n(n+1)/2
  const std::int64_t center = static_cast<std::int64_t>(n * m);        // doubled nm/2
  const std::int64_t obs_u2 = observed2 - offset;
  double hit = 0;
  double all = 0;
  for (std::int64_t s = 0; s <= total; ++s) {
    const std::uint64_t c = counts[n][s];
    if (c == 0) continue;
    const std::int64_t u2 = s - offset;
    all += static_cast<double>(c);
    bool extreme = false;
    switch (alt) {
      case Alternative::kTwoSided: extreme = std::llabs(u2 - center) >= std::llabs(obs_u2 - center); break;
      case Alternative::kGreater: extreme = u2 >= obs_u2; break;
      case Alternative::kLess: extreme = u2 <= obs_u2; break;
    }
    if (extreme) hit += static_cast<double>(c);
  }
  return std::min(1.0, hit / all);
}

double NormalP(double u, double n, double m, double tie_sum, Alternative alt) {
  const double big_n = n + m;
  const double mu = n * m / 2;
  const double var = n * m / 12 * ((big_n + 1) - tie_sum / (big_n * (big_n - 1)));
  if (var <= 0) return 1.0;
  const double sigma = std::sqrt(var);
  switch (alt) {
    case Alternative::kTwoSided: {
      const double z = std::max(0.0, std::fabs(u - mu) - 0.5) / sigma;
      return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    }
    case Alternative::kGreater: return 0.5 * std::erfc((u - mu - 0.5) / sigma / std::sqrt(2.0));
    case Alternative::kLess: return 0.5 * std::erfc(-(u - mu + 0.5) / sigma / std::sqrt(2.0));
  }
  return 1.0;
}

double Mean(const std::vector<double>& v) {
  return v.empty() ? 0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::string_view AlternativeName(Alternative alt) {
  switch (alt) {
    case Alternative::kTwoSided: return "two-sided";
    case Alternative::kGreater: return "greater";
    case Alternative::kLess: return "less";
  }
  return "two-sided";
}

Alternative ParseAlternative(std::string_view name) {
  if (name == "two-sided") return Alternative::kTwoSided;
  if (name == "greater") return Alternative::kGreater;
  if (name == "less") return Alternative::kLess;
  throw Error(ErrorCode::kInvalidArgument, "unknown alternative " + std::string(name));
}

MwuResult MannWhitneyU(std::span<const double> xs, std::span<const double> ys, Alternative alt) {
  if (xs.empty() || ys.empty()) throw Error(ErrorCode::kEmptySample, "both samples need at least one value");
  std::vector<double> pooled(xs.begin(), xs.end());
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const auto ranks = DoubledMidranks(pooled);
  const std::int64_t rank_sum2 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(xs.size()),
                                                 std::int64_t{0});
  const double n = static_cast<double>(xs.size());
  const double m = static_cast<double>(ys.size());
  MwuResult r;
  r.u = static_cast<double>(rank_sum2) / 2 - n * (n + 1) / 2;
  if (xs.size() * ys.size() <= kExactMwuLimit) {
    r.exact = true;
    std::vector<std::int64_t> order(ranks);
    r.p = ExactP(order, xs.size(), rank_sum2, alt);
  } else {
    r.p = NormalP(r.u, n, m, TieSum(pooled), alt);
  }
  return r;
}

ComparisonReport CompareArms(std::string_view benchmark,
                             const std::map<std::string, std::vector<double>>& arms,
                             std::string_view baseline, Alternative alt, double alpha) {
  const auto base = arms.find(std::string(baseline));
  if (base == arms.end()) throw Error(ErrorCode::kBaselineNotFound, std::string(baseline));
  if (base->second.empty()) throw Error(ErrorCode::kEmptySample, "baseline arm has no values");
  ComparisonReport rep;
  rep.benchmark = benchmark;
  rep.baseline = baseline;
  rep.alternative = alt;
  rep.alpha = alpha;
  const double base_mean = Mean(base->second);
  auto summarize = [&](const std::string& name, const std::vector<double>& values) {
    if (values.empty()) throw Error(ErrorCode::kEmptySample, "arm " + name + " has no values");
    ArmSummary a{name, values, Mean(values), 1.0};
    if (base_mean != 0) {
      a.normalized = a.mean / base_mean;
    } else if (a.mean != 0) {
      a.normalized = HUGE_VAL;
    }
    return a;
  };
  rep.arms.push_back(summarize(base->first, base->second));
  for (const auto& [name, values] : arms) {
    if (name == base->first) continue;
    rep.arms.push_back(summarize(name, values));
    ArmComparison c{name, base->first, MannWhitneyU(values, base->second, alt), false};
    c.significant = c.test.p < alpha && values.size() >= 2 && base->second.size() >= 2;
    rep.pairs.push_back(std::move(c));
  }
  return rep;
}

ComparisonReport CompareArms(std::string_view benchmark,
                             const std::map<std::string, std::vector<CampaignResult>>& arms,
                             std::string_view baseline, Alternative alt, double alpha) {
  std::map<std::string, std::vector<double>> values;
  for (const auto& [name, results] : arms) {
    auto& v = values[name];
    for (const auto& r : results) v.push_back(static_cast<double>(r.final_coverage.size()));
  }
  return CompareArms(benchmark, values, baseline, alt, alpha);
}

std::string ComparisonReportJson(const ComparisonReport& rep) {
  nlohmann::ordered_json j;
  j["benchmark"] = rep.benchmark;
  j["baseline"] = rep.baseline;
  j["alternative"] = AlternativeName(rep.alternative);
  j["alpha"] = rep.alpha;
  auto arms = nlohmann::ordered_json::array();
  for (const auto& a : rep.arms) {
    nlohmann::ordered_json arm = {{"name", a.name}, {"values", a.values}, {"mean", a.mean}};
    if (std::isfinite(a.normalized)) {
      arm["normalized"] = a.normalized;
    } else {
      arm["normalized"] = nullptr;
    }
    arms.push_back(std::move(arm));
  }
  j["arms"] = std::move(arms);
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& c : rep.pairs) {
    pairs.push_back({{"arm", c.arm},
                     {"baseline", c.baseline},
                     {"u_stat", c.test.u},
                     {"p_value", c.test.p},
                     {"exact", c.test.exact},
                     {"significant", c.significant}});
  }
  j["pairs"] = std::move(pairs);
  return j.dump(2) + "\n";
}

std::string ComparisonReportText(const ComparisonReport& rep) {
  std::string out = "benchmark " + rep.benchmark + ", baseline " + rep.baseline + " (" +
                    std::string(AlternativeName(rep.alternative)) + ")\n";
  char buf[256];
  for (const auto& a : rep.arms) {
    std::snprintf(buf, sizeof buf, "  %-12s n=%zu mean=%.2f normalized=%.3f\n", a.name.c_str(), a.values.size(),
                  a.mean, a.normalized);
    out += buf;
  }
  for (const auto& c : rep.pairs) {
    std::snprintf(buf, sizeof buf, "  %s vs %s: U=%.1f p=%.4g%s%s\n", c.arm.c_str(), c.baseline.c_str(), c.test.u,
                  c.test.p, c.test.exact ? " (exact)" : " (normal approx.)", c.significant ? " *" : "");
    out += buf;
  }
  return out;
}

}  // namespace predfuzz

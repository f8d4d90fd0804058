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

#include "support/oracles.h"

#include <algorithm>
#include <cmath>
#include <functional>

namespace predfuzz::testing {

SmallGraph RandomGraph(std::mt19937_64& rng, int max_nodes, int max_edges, bool connected) {
  SmallGraph g;
  g.n = std::uniform_int_distribution<int>(2, max_nodes)(rng);
  g.succ.assign(static_cast<std::size_t>(g.n), {});
  std::set<std::pair<int, int>> edges;
  auto add = [&](int a, int b) {
    if (edges.insert({a, b}).second) g.succ[static_cast<std::size_t>(a)].push_back(b);
  };
  if (connected) {
    for (int v = 1; v < g.n; ++v) add(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
  }
  const int budget = std::max(static_cast<int>(edges.size()), max_edges);
  const int extra = std::uniform_int_distribution<int>(0, budget - static_cast<int>(edges.size()))(rng);
  std::uniform_int_distribution<int> node(0, g.n - 1);
  for (int i = 0; i < extra; ++i) add(node(rng), node(rng));
  return g;
}

std::string BlockId(int node) { return "b" + std::to_string(node); }

InterproceduralCfg ToCfg(const SmallGraph& g) {
  std::vector<BasicBlock> blocks;
  std::vector<CfgEdge> edges;
  for (int v = 0; v < g.n; ++v) {
    blocks.push_back({BlockId(v), "p", "C", "m", v + 1});
    for (int w : g.succ[static_cast<std::size_t>(v)]) edges.push_back({BlockId(v), BlockId(w), EdgeKind::kBranch});
  }
  return InterproceduralCfg(std::move(blocks), std::move(edges), BlockId(0));
}

std::vector<std::vector<bool>> TransitiveClosure(const SmallGraph& g) {
  const auto n = static_cast<std::size_t>(g.n);
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = true;
    for (int j : g.succ[i]) m[i][static_cast<std::size_t>(j)] = true;
  }
  // (I + A)^(2^k) covers paths of length up to 2^k.
  for (std::size_t len = 1; len < n; len *= 2) {
    std::vector<std::vector<bool>> sq(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!m[i][k]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (m[k][j]) sq[i][j] = true;
        }
      }
    }
    m = std::move(sq);
  }
  return m;
}

std::vector<std::optional<std::set<int>>> AllPathsDominators(const SmallGraph& g) {
  std::vector<std::optional<std::set<int>>> dom(static_cast<std::size_t>(g.n));
  std::vector<int> path;
  std::vector<bool> on_path(static_cast<std::size_t>(g.n), false);
  std::function<void(int)> walk = [&](int v) {
    path.push_back(v);
    on_path[static_cast<std::size_t>(v)] = true;
    std::set<int> nodes(path.begin(), path.end());
    auto& d = dom[static_cast<std::size_t>(v)];
    if (!d) {
      d = nodes;
    } else {
      std::set<int> keep;
      std::set_intersection(d->begin(), d->end(), nodes.begin(), nodes.end(), std::inserter(keep, keep.end()));
      d = std::move(keep);
    }
    for (int w : g.succ[static_cast<std::size_t>(v)]) {
      if (!on_path[static_cast<std::size_t>(w)]) walk(w);
    }
    on_path[static_cast<std::size_t>(v)] = false;
    path.pop_back();
  };
  walk(0);
  return dom;
}

std::vector<std::optional<int>> OracleIdom(const SmallGraph& g) {
  const auto dom = AllPathsDominators(g);
  std::vector<std::optional<int>> idom(static_cast<std::size_t>(g.n));
  for (int v = 0; v < g.n; ++v) {
    const auto& d = dom[static_cast<std::size_t>(v)];
    if (!d) continue;
    if (v == 0) {
      idom[0] = 0;
      continue;
    }
    // The deepest strict dominator is the one with the most dominators.
    std::optional<int> best;
    for (int s : *d) {
      if (s == v) continue;
      if (!best || dom[static_cast<std::size_t>(s)]->size() > dom[static_cast<std::size_t>(*best)]->size()) best = s;
    }
    idom[static_cast<std::size_t>(v)] = best;
  }
  return idom;
}

std::size_t OracleScore(const SmallGraph& g, int target) {
  const auto dom = AllPathsDominators(g);
  if (!dom[static_cast<std::size_t>(target)]) return 0;
  const auto closure = TransitiveClosure(g);
  std::size_t count = 0;
  for (int v = 0; v < g.n; ++v) {
    const auto& d = dom[static_cast<std::size_t>(v)];
    if (closure[static_cast<std::size_t>(target)][static_cast<std::size_t>(v)] && d && d->count(target)) ++count;
  }
  return count;
}

double PairwiseU(const std::vector<double>& xs, const std::vector<double>& ys) {
  double u = 0;
  for (double x : xs) {
    for (double y : ys) u += x > y ? 1.0 : x == y ? 0.5 : 0.0;
  }
  return u;
}

double PermutationP(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& alternative) {
  std::vector<double> pooled(xs);
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const std::size_t total = pooled.size();
  const double center = static_cast<double>(xs.size() * ys.size()) / 2;
  const double observed = PairwiseU(xs, ys);
  std::vector<bool> pick(total, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(xs.size()), true);
  std::size_t hit = 0;
  std::size_t all = 0;
  constexpr double kEps = 1e-9;
  // prev_permutation over a sorted-descending mask visits every subset once.
  do {
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < total; ++i) (pick[i] ? a : b).push_back(pooled[i]);
    const double u = PairwiseU(a, b);
    bool extreme = false;
    if (alternative == "greater") {
      extreme = u >= observed - kEps;
    } else if (alternative == "less") {
      extreme = u <= observed + kEps;
    } else {
      extreme = std::fabs(u - center) >= std::fabs(observed - center) - kEps;
    }
    hit += extreme ? 1 : 0;
    ++all;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return static_cast<double>(hit) / static_cast<double>(all);
}

}  // namespace predfuzz::testing

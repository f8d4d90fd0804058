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
#include <deque>
#include <tuple>

#include "cfg/cfg.h"
#include "common/error.h"

namespace predfuzz {

using Index = InterproceduralCfg::Index;

DominatorTree::DominatorTree(std::vector<std::optional<Index>> idom, Index root)
    : idom_(std::move(idom)), children_(idom_.size()), root_(root) {
  for (Index n = 0; n < idom_.size(); ++n) {
    if (idom_[n] && n != root_) children_[*idom_[n]].push_back(n);
  }
}

bool DominatorTree::Dominates(Index d, Index n) const {
  if (!reachable(n) || !reachable(d)) return false;
  for (Index cur = n;; cur = *idom_[cur]) {
    if (cur == d) return true;
    if (cur == root_) return false;
  }
}

std::vector<Index> DominatorTree::Subtree(Index n) const {
  std::vector<Index> out;
  if (!reachable(n)) return out;
  std::vector<Index> stack{n};
  while (!stack.empty()) {
    Index cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (Index c : children_[cur]) stack.push_back(c);
  }
  return out;
}

namespace {

std::vector<Index> ReversePostorder(const InterproceduralCfg& g) {
  std::vector<Index> post;
  std::vector<bool> seen(g.size(), false);
  // Iterative DFS; the second tuple element is the next successor to visit.
  std::vector<std::pair<Index, std::size_t>> stack{{g.entry(), 0}};
  seen[g.entry()] = true;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    auto succ = g.successors(node);
    if (next < succ.size()) {
      Index s = succ[next++];
      if (!seen[s]) {
        seen[s] = true;
        stack.emplace_back(s, 0);
      }
    } else {
      post.push_back(node);
      stack.pop_back();
    }
  }
  std::reverse(post.begin(), post.end());
  return post;
}

}  // namespace

DominatorTree ComputeDominatorTree(const InterproceduralCfg& g) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  const std::vector<Index> rpo = ReversePostorder(g);
  std::vector<std::size_t> order(g.size(), kUnset);
  for (std::size_t i = 0; i < rpo.size(); ++i) order[rpo[i]] = i;

  // Indexed by rpo position.
  std::vector<std::size_t> doms(rpo.size(), kUnset);
  doms[0] = 0;
  auto intersect = [&](std::size_t a, std::size_t b) {
    while (a != b) {
      while (a > b) a = doms[a];
      while (b > a) b = doms[b];
    }
    return a;
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 1; i < rpo.size(); ++i) {
      std::size_t new_idom = kUnset;
      for (Index p : g.predecessors(rpo[i])) {
        std::size_t po = order[p];
        if (po == kUnset || doms[po] == kUnset) continue;
        new_idom = new_idom == kUnset ? po : intersect(po, new_idom);
      }
      if (new_idom != doms[i]) {
        doms[i] = new_idom;
        changed = true;
      }
    }
  }

  std::vector<std::optional<Index>> idom(g.size());
  for (std::size_t i = 0; i < rpo.size(); ++i) idom[rpo[i]] = rpo[doms[i]];
  return DominatorTree(std::move(idom), g.entry());
}

std::vector<bool> ReachableMask(const InterproceduralCfg& g, Index from) {
  std::vector<bool> seen(g.size(), false);
  std::deque<Index> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    Index n = queue.front();
    queue.pop_front();
    for (Index s : g.successors(n)) {
      if (!seen[s]) {
        seen[s] = true;
        queue.push_back(s);
      }
    }
  }
  return seen;
}

std::set<std::string> ReachableFrom(const InterproceduralCfg& g, std::string_view id) {
  auto mask = ReachableMask(g, g.IndexOf(id));
  std::set<std::string> out;
  for (Index i = 0; i < g.size(); ++i) {
    if (mask[i]) out.insert(g.block(i).id);
  }
  return out;
}

std::size_t ScoreBranch(const InterproceduralCfg& g, const DominatorTree& tree,
                        Index target) {
  if (!tree.reachable(target)) return 0;
  auto reach = ReachableMask(g, target);
  std::size_t score = 0;
  for (Index n : tree.Subtree(target)) {
    if (reach[n]) ++score;
  }
  return score;
}

std::size_t ScoreBranch(const InterproceduralCfg& g, const DominatorTree& tree,
                        const BranchOutcome& outcome) {
  return ScoreBranch(g, tree, g.IndexOf(outcome.target_block));
}

std::vector<StaticPredicateRecord> RankPredicates(const InterproceduralCfg& g) {
  const DominatorTree tree = ComputeDominatorTree(g);
  std::vector<StaticPredicateRecord> records;
  for (Index p = 0; p < g.size(); ++p) {
    auto targets = g.branch_targets(p);
    if (targets.size() < 2) continue;
    const BasicBlock& b = g.block(p);
    StaticPredicateRecord rec{b.source_class, b.source_method, b.line, {}, 0};
    for (Index t : targets) {
      BranchOutcome o{b.id, g.block(t).id, g.block(t).line, ScoreBranch(g, tree, t)};
      rec.score = std::max(rec.score, o.dominance);
      rec.branches.push_back(std::move(o));
    }
    records.push_back(std::move(rec));
  }
  std::stable_sort(records.begin(), records.end(),
            [](const StaticPredicateRecord& a, const StaticPredicateRecord& b) {
              return std::tie(b.score, a.source_class, a.source_method, a.line) <
                     std::tie(a.score, b.source_class, b.source_method, b.line);
            });
  return records;
}

}  // namespace predfuzz

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

#ifndef PREDFUZZ_CFG_CFG_H_
#define PREDFUZZ_CFG_CFG_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace predfuzz {

enum class EdgeKind { kFallthrough, kBranch, kCall, kReturn };

std::string_view EdgeKindName(EdgeKind kind);

struct BasicBlock {
  std::string id;
  std::string owner;  // procedure name
  std::string source_class;
  std::string source_method;
  int line = 1;
};

struct CfgEdge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::kFallthrough;

  friend bool operator==(const CfgEdge&, const CfgEdge&) = default;
  friend auto operator<=>(const CfgEdge&, const CfgEdge&) = default;
};

// One procedure as written in a CFG description. Block ids are local to the
// procedure; the first block is the procedure entry. When `exits` is empty
// every block without an intraprocedural successor is an exit.
struct ProcedureCfg {
  std::string name;
  std::string source_class;
  std::string source_method;
  std::vector<BasicBlock> blocks;
  std::vector<CfgEdge> edges;
  std::vector<std::string> exits;
};

struct CallEdge {
  std::string caller;      // procedure name
  std::string call_block;  // local block id inside the caller
  std::string callee;      // procedure name
};

struct CfgDescription {
  std::vector<ProcedureCfg> procedures;
  std::vector<CallEdge> calls;
  std::vector<std::string> exclusions;
  std::string entry;
};

// Parses the line-oriented CFG description format (see docs/formats.md).
// Throws Error(kParseError) with the offending line number.
CfgDescription ParseCfgDescription(std::string_view text);

// Supergraph of basic blocks. Immutable after construction; all queries are
// const and safe to call from several threads.
class InterproceduralCfg {
 public:
  using Index = std::size_t;

  struct Edge {
    Index from;
    Index to;
    EdgeKind kind;
  };

  // Blocks whose source_class starts with an exclusion prefix are dropped
  // together with their incident edges. Throws kEntryNotFound if `entry` is
  // missing (or excluded) and kBlockNotFound for edges naming unknown blocks.
  InterproceduralCfg(std::vector<BasicBlock> blocks, std::vector<CfgEdge> edges,
                     std::string_view entry,
                     std::vector<std::string> exclusions = {});

  std::size_t size() const { return blocks_.size(); }
  const BasicBlock& block(Index i) const { return blocks_[i]; }
  const std::vector<BasicBlock>& blocks() const { return blocks_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& exclusions() const { return exclusions_; }
  Index entry() const { return entry_; }

  std::optional<Index> Find(std::string_view id) const;
  // Throws kBlockNotFound.
  Index IndexOf(std::string_view id) const;

  std::span<const Index> successors(Index i) const { return succ_[i]; }
  std::span<const Index> predecessors(Index i) const { return pred_[i]; }
  // Targets of branch-kind out-edges, in declaration order.
  std::span<const Index> branch_targets(Index i) const { return branch_succ_[i]; }

  // Edge list in id form, sorted; convenient for comparisons in tests.
  std::vector<CfgEdge> EdgeSet() const;

  bool IsExcluded(std::string_view source_class) const;

 private:
  std::vector<BasicBlock> blocks_;
  std::vector<Edge> edges_;
  std::vector<std::string> exclusions_;
  std::unordered_map<std::string, Index> by_id_;
  std::vector<std::vector<Index>> succ_;
  std::vector<std::vector<Index>> pred_;
  std::vector<std::vector<Index>> branch_succ_;
  Index entry_ = 0;
};

struct SupergraphBuild {
  InterproceduralCfg graph;
  std::vector<std::string> dangling_calls;  // one message per dropped call
};

// Joins per-procedure CFGs into a supergraph. Block ids become
// "<procedure>/<local id>". A call replaces the call block's fallthrough
// edges with a call edge to the callee entry and return edges from each
// callee exit to the call block's former fallthrough successors. Calls to
// missing or excluded procedures are reported and the call block keeps its
// fallthrough edges.
SupergraphBuild BuildSupergraph(const CfgDescription& description);

std::string QualifiedBlockId(std::string_view procedure, std::string_view local_id);

class DominatorTree {
 public:
  using Index = InterproceduralCfg::Index;

  DominatorTree() = default;
  DominatorTree(std::vector<std::optional<Index>> idom, Index root);

  // nullopt for blocks unreachable from the entry. The entry maps to itself.
  std::optional<Index> idom(Index n) const { return idom_[n]; }
  bool reachable(Index n) const { return idom_[n].has_value(); }
  Index root() const { return root_; }
  std::span<const Index> children(Index n) const { return children_[n]; }

  // Reflexive: every reachable block dominates itself.
  bool Dominates(Index d, Index n) const;
  // D(n): n and every block it dominates. Empty when n is unreachable.
  std::vector<Index> Subtree(Index n) const;

 private:
  std::vector<std::optional<Index>> idom_;
  std::vector<std::vector<Index>> children_;
  Index root_ = 0;
};

// Iterative dominance (Cooper, Harvey and Kennedy) over reverse postorder.
DominatorTree ComputeDominatorTree(const InterproceduralCfg& g);

// Forward-reachable set including `from` itself, as a membership vector.
std::vector<bool> ReachableMask(const InterproceduralCfg& g,
                                InterproceduralCfg::Index from);
// Throws kBlockNotFound for unknown ids.
std::set<std::string> ReachableFrom(const InterproceduralCfg& g, std::string_view id);

struct BranchOutcome {
  std::string predicate_id;  // qualified block id of the predicate
  std::string target_block;
  int line = 1;
  std::size_t dominance = 0;
};

struct StaticPredicateRecord {
  std::string source_class;
  std::string source_method;
  int line = 1;
  std::vector<BranchOutcome> branches;
  std::size_t score = 0;
};

// |R(target) ∩ D(target)|; 0 when the target is unreachable from the entry.
std::size_t ScoreBranch(const InterproceduralCfg& g, const DominatorTree& tree,
                        InterproceduralCfg::Index target);
std::size_t ScoreBranch(const InterproceduralCfg& g, const DominatorTree& tree,
                        const BranchOutcome& outcome);

// One record per block with at least two branch-kind out-edges, sorted by
// (-score, class, method, line).
std::vector<StaticPredicateRecord> RankPredicates(const InterproceduralCfg& g);

}  // namespace predfuzz

#endif  // PREDFUZZ_CFG_CFG_H_

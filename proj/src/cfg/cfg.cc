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

#include "cfg/cfg.h"

#include <algorithm>
#include <map>
#include <utility>

#include "common/error.h"

namespace predfuzz {

std::string_view EdgeKindName(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kFallthrough: return "fallthrough";
    case EdgeKind::kBranch: return "branch";
    case EdgeKind::kCall: return "call";
    case EdgeKind::kReturn: return "return";
  }
  return "?";
}

namespace {

void PushUnique(std::vector<std::size_t>& v, std::size_t x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

bool HasPrefix(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

InterproceduralCfg::InterproceduralCfg(std::vector<BasicBlock> blocks,
                                       std::vector<CfgEdge> edges,
                                       std::string_view entry,
                                       std::vector<std::string> exclusions)
    : exclusions_(std::move(exclusions)) {
  std::set<std::string> dropped;
  for (auto& b : blocks) {
    if (IsExcluded(b.source_class)) {
      dropped.insert(b.id);
      continue;
    }
    if (b.line < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "block " + b.id + " has line " + std::to_string(b.line));
    }
    if (!by_id_.emplace(b.id, blocks_.size()).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate block id " + b.id);
    }
    blocks_.push_back(std::move(b));
  }

  auto entry_it = by_id_.find(std::string(entry));
  if (entry_it == by_id_.end()) {
    throw Error(ErrorCode::kEntryNotFound, "entry block " + std::string(entry));
  }
  entry_ = entry_it->second;

  succ_.resize(blocks_.size());
  pred_.resize(blocks_.size());
  branch_succ_.resize(blocks_.size());
  for (const auto& e : edges) {
    auto from = Find(e.from);
    auto to = Find(e.to);
    if (!from || !to) {
      if ((!from && dropped.count(e.from)) || (!to && dropped.count(e.to))) continue;
      throw Error(ErrorCode::kBlockNotFound,
                  "edge " + e.from + " -> " + e.to + " names an unknown block");
    }
    edges_.push_back({*from, *to, e.kind});
    PushUnique(succ_[*from], *to);
    PushUnique(pred_[*to], *from);
    if (e.kind == EdgeKind::kBranch) PushUnique(branch_succ_[*from], *to);
  }
}

std::optional<InterproceduralCfg::Index> InterproceduralCfg::Find(
    std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

InterproceduralCfg::Index InterproceduralCfg::IndexOf(std::string_view id) const {
  auto i = Find(id);
  if (!i) throw Error(ErrorCode::kBlockNotFound, std::string(id));
  return *i;
}

std::vector<CfgEdge> InterproceduralCfg::EdgeSet() const {
  std::vector<CfgEdge> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) {
    out.push_back({blocks_[e.from].id, blocks_[e.to].id, e.kind});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool InterproceduralCfg::IsExcluded(std::string_view source_class) const {
  return std::any_of(exclusions_.begin(), exclusions_.end(),
                     [&](const std::string& p) { return HasPrefix(source_class, p); });
}

std::string QualifiedBlockId(std::string_view procedure, std::string_view local_id) {
  std::string id(procedure);
  id += '/';
  id += local_id;
  return id;
}

SupergraphBuild BuildSupergraph(const CfgDescription& description) {
  std::map<std::string, const ProcedureCfg*> procs;
  for (const auto& p : description.procedures) {
    if (!procs.emplace(p.name, &p).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate procedure " + p.name);
    }
  }
  auto excluded = [&](const std::string& cls) {
    return std::any_of(description.exclusions.begin(), description.exclusions.end(),
                       [&](const std::string& p) { return HasPrefix(cls, p); });
  };
  // A procedure is callable when its entry block survives exclusion.
  auto callable = [&](const ProcedureCfg& p) {
    if (p.blocks.empty()) return false;
    const auto& first = p.blocks.front();
    return !excluded(first.source_class.empty() ? p.source_class : first.source_class);
  };

  auto entry_it = procs.find(description.entry);
  if (entry_it == procs.end() || !callable(*entry_it->second)) {
    throw Error(ErrorCode::kEntryNotFound, "entry procedure " + description.entry);
  }

  std::vector<BasicBlock> blocks;
  std::vector<CfgEdge> edges;
  for (const auto& p : description.procedures) {
    for (const auto& b : p.blocks) {
      BasicBlock q = b;
      q.id = QualifiedBlockId(p.name, b.id);
      q.owner = p.name;
      if (q.source_class.empty()) q.source_class = p.source_class;
      if (q.source_method.empty()) q.source_method = p.source_method;
      blocks.push_back(std::move(q));
    }
  }

  // Fallthrough successors of each call block become return sites.
  std::map<std::string, std::vector<std::string>> return_sites;
  std::vector<std::string> dangling;
  std::vector<std::pair<std::string, const ProcedureCfg*>> resolved_calls;
  for (const auto& c : description.calls) {
    auto caller = procs.find(c.caller);
    auto callee = procs.find(c.callee);
    std::string site = QualifiedBlockId(c.caller, c.call_block);
    if (caller == procs.end() || callee == procs.end() || !callable(*callee->second)) {
      dangling.push_back("DanglingCall: " + site + " -> " + c.callee);
      continue;
    }
    return_sites.emplace(site, std::vector<std::string>{});
    resolved_calls.emplace_back(site, callee->second);
  }

  for (const auto& p : description.procedures) {
    for (const auto& e : p.edges) {
      CfgEdge q{QualifiedBlockId(p.name, e.from), QualifiedBlockId(p.name, e.to), e.kind};
      auto rs = return_sites.find(q.from);
      if (rs != return_sites.end() && e.kind == EdgeKind::kFallthrough) {
        rs->second.push_back(q.to);
        continue;
      }
      edges.push_back(std::move(q));
    }
  }

  for (const auto& [site, callee] : resolved_calls) {
    edges.push_back({site, QualifiedBlockId(callee->name, callee->blocks.front().id),
                     EdgeKind::kCall});
    std::vector<std::string> exits = callee->exits;
    if (exits.empty()) {
      for (const auto& b : callee->blocks) {
        bool has_out = std::any_of(callee->edges.begin(), callee->edges.end(),
                                   [&](const CfgEdge& e) { return e.from == b.id; });
        if (!has_out) exits.push_back(b.id);
      }
    }
    for (const auto& x : exits) {
      for (const auto& ret : return_sites[site]) {
        edges.push_back({QualifiedBlockId(callee->name, x), ret, EdgeKind::kReturn});
      }
    }
  }

  const auto& entry_proc = *entry_it->second;
  InterproceduralCfg graph(std::move(blocks), std::move(edges),
                           QualifiedBlockId(entry_proc.name, entry_proc.blocks.front().id),
                           description.exclusions);
  return {std::move(graph), std::move(dangling)};
}

}  // namespace predfuzz

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

#include <sstream>
#include <string>
#include <vector>

#include "cfg/cfg.h"
#include "common/error.h"

namespace predfuzz {
namespace {

std::vector<std::string> Tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line.substr(0, line.find('#')));
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

[[noreturn]] void Fail(int line_no, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + what);
}

int ParseLine(int line_no, const std::string& s) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size() || v < 1) Fail(line_no, "bad source line '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    Fail(line_no, "bad source line '" + s + "'");
  }
}

}  // namespace

CfgDescription ParseCfgDescription(std::string_view text) {
  CfgDescription d;
  ProcedureCfg* cur = nullptr;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    auto t = Tokenize(raw);
    if (t.empty()) continue;
    const std::string& kw = t[0];

    if (kw == "entry" && t.size() == 2) {
      d.entry = t[1];
    } else if (kw == "exclude" && t.size() == 2) {
      d.exclusions.push_back(t[1]);
    } else if (kw == "proc" && t.size() == 4) {
      if (cur) Fail(line_no, "nested proc");
      d.procedures.push_back({t[1], t[2], t[3], {}, {}, {}});
      cur = &d.procedures.back();
    } else if (kw == "end" && t.size() == 1) {
      if (!cur) Fail(line_no, "end without proc");
      if (cur->blocks.empty()) Fail(line_no, "procedure " + cur->name + " has no blocks");
      cur = nullptr;
    } else if (!cur) {
      Fail(line_no, "unexpected '" + kw + "' outside proc");
    } else if (kw == "block" && (t.size() == 3 || t.size() == 5)) {
      BasicBlock b{t[1], cur->name, "", "", ParseLine(line_no, t[2])};
      if (t.size() == 5) {
        b.source_class = t[3];
        b.source_method = t[4];
      }
      cur->blocks.push_back(std::move(b));
    } else if (kw == "seq" && t.size() >= 3) {
      for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        cur->edges.push_back({t[i], t[i + 1], EdgeKind::kFallthrough});
      }
    } else if (kw == "branch" && t.size() >= 3) {
      for (std::size_t i = 2; i < t.size(); ++i) {
        cur->edges.push_back({t[1], t[i], EdgeKind::kBranch});
      }
    } else if (kw == "exit" && t.size() >= 2) {
      cur->exits.insert(cur->exits.end(), t.begin() + 1, t.end());
    } else if (kw == "call" && t.size() == 3) {
      d.calls.push_back({cur->name, t[1], t[2]});
    } else {
      Fail(line_no, "cannot parse '" + raw + "'");
    }
  }
  if (cur) Fail(line_no, "procedure " + cur->name + " not closed");
  if (d.entry.empty()) Fail(line_no, "missing entry");

  // Local edges must name local blocks.
  for (const auto& p : d.procedures) {
    auto known = [&](const std::string& id) {
      for (const auto& b : p.blocks) {
        if (b.id == id) return true;
      }
      return false;
    };
    for (const auto& e : p.edges) {
      if (!known(e.from) || !known(e.to)) {
        throw Error(ErrorCode::kParseError,
                    "procedure " + p.name + ": edge " + e.from + " -> " + e.to +
                        " names an unknown block");
      }
    }
    for (const auto& x : p.exits) {
      if (!known(x)) {
        throw Error(ErrorCode::kParseError, "procedure " + p.name + ": unknown exit " + x);
      }
    }
  }
  for (const auto& c : d.calls) {
    bool ok = false;
    for (const auto& p : d.procedures) {
      if (p.name != c.caller) continue;
      for (const auto& b : p.blocks) ok = ok || b.id == c.call_block;
    }
    if (!ok) {
      throw Error(ErrorCode::kParseError,
                  "call from unknown block " + c.caller + "/" + c.call_block);
    }
  }
  return d;
}

}  // namespace predfuzz

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

#include "targets/minilang/minilang.h"

#include <string_view>

#include "targets/embedded.h"

namespace predfuzz {
namespace minilang {
namespace {

constexpr char kLexer[] = "minilang.Lexer";
constexpr char kParser[] = "minilang.Parser";
constexpr char kChecker[] = "minilang.TypeChecker";
constexpr char kDecls[] = "minilang.DeclarationAnalyzer";

RunOutcome Run(std::span<const std::uint8_t> input, ExecutionTrace& trace) {
  Probe probe(trace);
  const std::string_view source(reinterpret_cast<const char*>(input.data()), input.size());
  try {
    const auto tokens = Tokenize(source, probe);
    const auto program = Parse(tokens, probe);
    const auto errors = Check(program, probe);
    if (errors.empty()) return {RunStatus::kOk, "", {}};
    std::string reason = "typecheck:";
    for (const auto& e : errors) reason += " " + e + ";";
    reason.pop_back();
    return {RunStatus::kRejected, std::move(reason), {}};
  } catch (const PhaseError& e) {
    return {RunStatus::kRejected, e.phase + ": " + e.message, {}};
  }
}

}  // namespace

const BranchTable& Table() {
  static const BranchTable* table = [] {
    std::vector<PredicateMeta> m = {
        predfuzz::Site(kLexer, "nextToken", 20, {21, 22, 23, 24, 25, 26, 27}),
        predfuzz::Site(kLexer, "indentation", 30, {31, 32, 33}),
        predfuzz::Site(kLexer, "indentation", 34, {35, 36}),
        predfuzz::Site(kLexer, "readString", 40, {41, 42}),
        predfuzz::Site(kParser, "parseProgram", 100, {101, 102, 103, 104}),
        predfuzz::Site(kParser, "parseClass", 106, {107, 108, 109, 110}),
        predfuzz::Site(kParser, "parseFunc", 112, {113, 114}),
        predfuzz::Site(kParser, "parseFunc", 116, {117, 118}),
        predfuzz::Site(kParser, "parseStmt", 120, {121, 122, 123, 124}),
        predfuzz::Site(kParser, "parseStmt", 126, {127, 128}),
        predfuzz::Site(kParser, "parseStmt", 130, {131, 132}),
        predfuzz::Site(kParser, "parsePrimary", 140, {141, 142, 143, 144, 145, 146, 147}),
        predfuzz::Site(kParser, "parsePrimary", 150, {151, 152, 153}),
        predfuzz::Site(kParser, "parseSum", 155, {156, 157, 158}),
        predfuzz::Site(kChecker, "analyzePlus", 206, {207, 208}),
        predfuzz::Site(kChecker, "analyzePlus", 209, {210, 211}),
        predfuzz::Site(kChecker, "analyzePlus", 213, {214, 215, 216, 217}),
        predfuzz::Site(kChecker, "analyzeClass", 250, {251, 252}),
        predfuzz::Site(kChecker, "analyzeClass", 253, {254, 255}),
        predfuzz::Site(kChecker, "analyzeAssign", 260, {261, 262}),
        predfuzz::Site(kChecker, "analyzeCall", 270, {271, 272, 273}),
        predfuzz::Site(kChecker, "analyzeCall", 274, {275, 276}),
        predfuzz::Site(kChecker, "analyzeCall", 277, {278, 279}),
        predfuzz::Site(kChecker, "analyzeMember", 280, {281, 282, 283}),
        predfuzz::Site(kChecker, "analyzeName", 285, {286, 287, 288}),
        predfuzz::Site(kChecker, "analyzeReturn", 290, {291, 292}),
        predfuzz::Site(kChecker, "analyzeIf", 295, {296, 297}),
        predfuzz::Site(kDecls, "analyzeMethod", 300, {301, 302}),
        predfuzz::Site(kDecls, "analyzeMethod", 303, {304, 308}),
        predfuzz::Site(kDecls, "analyzeMethod", 305, {306, 307}),
        predfuzz::Site(kDecls, "analyzeDecl", 312, {313, 314}),
    };
    return new BranchTable(std::move(m));
  }();
  return *table;
}

}  // namespace minilang

namespace targets_internal {

const TargetBinding& MinilangTarget() {
  static const TargetBinding* binding = [] {
    static_assert(minilang::kNumSites == 31);
    auto* t = new TargetBinding;
    t->target_id = "minilang";
    t->run = minilang::Run;
    t->branches = &minilang::Table();
    t->cfg_description = EmbeddedTargetFile("minilang/minilang.cfg");
    t->source_files = {"minilang/checker.cc", "minilang/parser.cc", "minilang/lexer.cc"};
    t->entry_point = "check";
    const std::string decls = std::string(minilang::kDecls) + ".analyzeMethod:";
    const std::string plus = std::string(minilang::kChecker) + ".analyzePlus:";
    t->refine_hints = {
        {decls + "303", 304, {"enable_classes", "enable_inheritance", "enable_method_override"}, "", 1},
        {decls + "305", 306, {"mismatch_signature"}, "", 1},
        {plus + "206", 208, {"enable_lists", "enable_list_plus"}, "plus_mixed_lists", 4},
        {plus + "209", 210, {"enable_lists", "enable_list_plus"}, "", 1},
    };
    return t;
  }();
  return *binding;
}

}  // namespace targets_internal
}  // namespace predfuzz

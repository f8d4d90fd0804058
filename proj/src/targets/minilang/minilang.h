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

#ifndef PREDFUZZ_TARGETS_MINILANG_MINILANG_H_
#define PREDFUZZ_TARGETS_MINILANG_MINILANG_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "targets/target.h"

// A small indentation-structured language:
//
//   class B(A):
//     x: int = 0
//     def m(self: B, n: int) -> int:
//       return n + 1
//   def f(s: str) -> [str]:
//     return [s] + ["hello"]
//   v: int = 1
//   v = f("a")
//
// Types are int, bool, str, object, user classes and lists [T]. Classes
// inherit singly; overriding methods must keep the parent's signature.
namespace predfuzz::minilang {

enum Site {
  // Lexer
  kTokenKind,
  kIndent,
  kDedentMatch,
  kStringEnd,
  // Parser
  kTopDecl,
  kClassMember,
  kParamType,
  kReturnType,
  kStmtKind,
  kElse,
  kAssign,
  kPrimary,
  kPostfix,
  kBinaryOp,
  // TypeChecker
  kPlusSame,
  kPlusLists,
  kPlusKind,
  kSuperDefined,
  kSuperSpecial,
  kAssignCompat,
  kCallTarget,
  kArity,
  kArgType,
  kMember,
  kName,
  kReturnCompat,
  kCondition,
  // DeclarationAnalyzer
  kSelfParam,
  kParentMethod,
  kSignature,
  kDuplicateDecl,
  kNumSites,
};

const BranchTable& Table();

enum class Tok {
  kName,
  kInt,
  kString,
  kKeyword,
  kOp,
  kNewline,
  kIndent,
  kDedent,
  kEof,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
};

struct PhaseError {
  std::string phase;
  std::string message;
};

// Throws PhaseError{"lex", ...}.
std::vector<Token> Tokenize(std::string_view source, Probe& probe);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind { kInt, kStr, kBool, kNone, kName, kList, kPlus, kCompare, kCall, kMember, kMethodCall };

struct Expr {
  ExprKind kind;
  std::string text;  // literal text, name, or member/method name
  std::vector<ExprPtr> args;  // operands, list items, call arguments; receiver first for members
};

enum class StmtKind { kPass, kReturn, kIf, kAssign, kExpr };

struct Stmt {
  StmtKind kind;
  ExprPtr target;  // assignment target
  ExprPtr value;   // returned, assigned or evaluated expression; if condition
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
};

struct VarDef {
  std::string name;
  std::string type;
  ExprPtr init;
  int line;
};

struct Param {
  std::string name;
  std::string type;
};

struct FuncDef {
  std::string name;
  std::vector<Param> params;
  std::string return_type;  // "<None>" when omitted
  std::vector<VarDef> locals;
  std::vector<Stmt> body;
  int line;
};

struct ClassDef {
  std::string name;
  std::string super;
  std::vector<VarDef> attrs;
  std::vector<FuncDef> methods;
  int line;
};

struct Program {
  std::vector<ClassDef> classes;
  std::vector<FuncDef> functions;
  std::vector<VarDef> globals;
  std::vector<Stmt> stmts;
};

// Throws PhaseError{"parse", ...}.
Program Parse(const std::vector<Token>& tokens, Probe& probe);

// Semantic errors in source order; empty for a well-typed program.
std::vector<std::string> Check(const Program& program, Probe& probe);

}  // namespace predfuzz::minilang

#endif  // PREDFUZZ_TARGETS_MINILANG_MINILANG_H_

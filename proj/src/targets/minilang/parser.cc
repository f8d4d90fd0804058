#include <utility>

#include "targets/minilang/minilang.h"

namespace predfuzz::minilang {
namespace {

constexpr int kMaxNesting = 64;

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, Probe& probe) : toks_(tokens), p_(probe) {}

  Program Run() {
    Program prog;
    while (!At(Tok::kEof)) {
      if (Accept(Tok::kNewline)) continue;
      std::size_t kind = 3;
      if (IsKeyword("class")) {
        kind = 0;
      } else if (IsKeyword("def")) {
        kind = 1;
      } else if (IsVarDef()) {
        kind = 2;
      }
      p_.Take(kTopDecl, kind);
      switch (kind) {
        case 0: prog.classes.push_back(Class()); break;
        case 1: prog.functions.push_back(Func()); break;
        case 2: prog.globals.push_back(Var()); break;
        default: prog.stmts.push_back(Statement()); break;
      }
    }
    return prog;
  }

 private:
  const Token& Cur() const { return toks_[pos_]; }
  bool At(Tok kind) const { return Cur().kind == kind; }
  bool IsOp(std::string_view op) const { return At(Tok::kOp) && Cur().text == op; }
  bool IsKeyword(std::string_view kw) const { return At(Tok::kKeyword) && Cur().text == kw; }
  bool IsVarDef() const {
    return At(Tok::kName) && toks_[pos_ + 1].kind == Tok::kOp && toks_[pos_ + 1].text == ":";
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw PhaseError{"parse", "line " + std::to_string(Cur().line) + ": " + what};
  }

  bool Accept(Tok kind) {
    if (!At(kind)) return false;
    ++pos_;
    return true;
  }
  void Expect(Tok kind, const char* what) {
    if (!Accept(kind)) Fail(std::string("expected ") + what);
  }
  void ExpectOp(std::string_view op) {
    if (!IsOp(op)) Fail("expected '" + std::string(op) + "'");
    ++pos_;
  }
  void ExpectKeyword(std::string_view kw) {
    if (!IsKeyword(kw)) Fail("expected '" + std::string(kw) + "'");
    ++pos_;
  }
  std::string Name() {
    if (!At(Tok::kName)) Fail("expected a name");
    return toks_[pos_++].text;
  }

  struct Nest {
    explicit Nest(Parser& parser) : parser_(parser) {
      if (++parser_.depth_ > kMaxNesting) parser_.Fail("nesting too deep");
    }
    ~Nest() { --parser_.depth_; }
    Parser& parser_;
  };

  std::string Type() {
    Nest nest(*this);
    if (IsOp("[")) {
      ++pos_;
      std::string inner = Type();
      ExpectOp("]");
      return "[" + inner + "]";
    }
    return Name();
  }

  VarDef Var() {
    VarDef v;
    v.line = Cur().line;
    v.name = Name();
    ExpectOp(":");
    v.type = Type();
    ExpectOp("=");
    v.init = Primary();
    Expect(Tok::kNewline, "end of line");
    return v;
  }

  ClassDef Class() {
    ClassDef c;
    c.line = Cur().line;
    ExpectKeyword("class");
    c.name = Name();
    ExpectOp("(");
    c.super = Name();
    ExpectOp(")");
    ExpectOp(":");
    Expect(Tok::kNewline, "end of line");
    Expect(Tok::kIndent, "an indented class body");
    while (!Accept(Tok::kDedent)) {
      std::size_t kind = 3;
      if (IsVarDef()) {
        kind = 0;
      } else if (IsKeyword("def")) {
        kind = 1;
      } else if (IsKeyword("pass")) {
        kind = 2;
      }
      p_.Take(kClassMember, kind);
      switch (kind) {
        case 0: c.attrs.push_back(Var()); break;
        case 1: c.methods.push_back(Func()); break;
        case 2:
          ++pos_;
          Expect(Tok::kNewline, "end of line");
          break;
        default: Fail("expected a class member");
      }
    }
    return c;
  }

  FuncDef Func() {
    FuncDef f;
    f.line = Cur().line;
    ExpectKeyword("def");
    f.name = Name();
    ExpectOp("(");
    while (!IsOp(")")) {
      if (!f.params.empty()) ExpectOp(",");
      Param param;
      param.name = Name();
      if (!p_.Cond(kParamType, IsOp(":"))) Fail("parameter without a type");
      ++pos_;
      param.type = Type();
      f.params.push_back(std::move(param));
    }
    ++pos_;
    f.return_type = "<None>";
    if (p_.Cond(kReturnType, IsOp("->"))) {
      ++pos_;
      f.return_type = Type();
    }
    ExpectOp(":");
    Expect(Tok::kNewline, "end of line");
    Expect(Tok::kIndent, "an indented function body");
    Nest nest(*this);
    while (!Accept(Tok::kDedent)) {
      if (IsVarDef()) {
        f.locals.push_back(Var());
      } else {
        f.body.push_back(Statement());
      }
    }
    return f;
  }

  std::vector<Stmt> Suite() {
    ExpectOp(":");
    Expect(Tok::kNewline, "end of line");
    Expect(Tok::kIndent, "an indented block");
    Nest nest(*this);
    std::vector<Stmt> body;
    while (!Accept(Tok::kDedent)) body.push_back(Statement());
    return body;
  }

  Stmt Statement() {
    Stmt s;
    std::size_t kind = 3;
    if (IsKeyword("pass")) {
      kind = 0;
    } else if (IsKeyword("return")) {
      kind = 1;
    } else if (IsKeyword("if")) {
      kind = 2;
    }
    p_.Take(kStmtKind, kind);
    switch (kind) {
      case 0:
        ++pos_;
        s.kind = StmtKind::kPass;
        break;
      case 1:
        ++pos_;
        s.kind = StmtKind::kReturn;
        if (!At(Tok::kNewline)) s.value = Expression();
        break;
      case 2:
        ++pos_;
        s.kind = StmtKind::kIf;
        s.value = Expression();
        s.then_body = Suite();
        if (p_.Cond(kElse, IsKeyword("else"))) {
          ++pos_;
          s.else_body = Suite();
        }
        return s;
      default: {
        ExprPtr e = Expression();
        if (p_.Cond(kAssign, IsOp("="))) {
          if (e->kind != ExprKind::kName && e->kind != ExprKind::kMember) {
            Fail("cannot assign to this expression");
          }
          ++pos_;
          s.kind = StmtKind::kAssign;
          s.target = std::move(e);
          s.value = Expression();
        } else {
          s.kind = StmtKind::kExpr;
          s.value = std::move(e);
        }
        break;
      }
    }
    Expect(Tok::kNewline, "end of line");
    return s;
  }

  static ExprPtr Make(ExprKind kind, std::string text = {}) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->text = std::move(text);
    return e;
  }

  ExprPtr Expression() {
    Nest nest(*this);
    ExprPtr left = Sum();
    if (IsOp("==") || IsOp("<")) {
      auto e = Make(ExprKind::kCompare, toks_[pos_++].text);
      e->args.push_back(std::move(left));
      e->args.push_back(Sum());
      return e;
    }
    return left;
  }

  ExprPtr Sum() {
    ExprPtr left = Primary();
    for (;;) {
      const std::size_t kind = IsOp("+") ? 0 : (IsOp("==") || IsOp("<")) ? 1 : 2;
      p_.Take(kBinaryOp, kind);
      if (kind != 0) return left;
      ++pos_;
      auto e = Make(ExprKind::kPlus);
      e->args.push_back(std::move(left));
      e->args.push_back(Primary());
      left = std::move(e);
    }
  }

  ExprPtr Primary() {
    Nest nest(*this);
    std::size_t kind = 6;
    if (At(Tok::kInt)) {
      kind = 0;
    } else if (At(Tok::kString)) {
      kind = 1;
    } else if (IsKeyword("True") || IsKeyword("False") || IsKeyword("None")) {
      kind = 2;
    } else if (At(Tok::kName)) {
      kind = 3;
    } else if (IsOp("[")) {
      kind = 4;
    } else if (IsOp("(")) {
      kind = 5;
    }
    p_.Take(kPrimary, kind);
    ExprPtr e;
    switch (kind) {
      case 0: e = Make(ExprKind::kInt, toks_[pos_++].text); break;
      case 1: e = Make(ExprKind::kStr, toks_[pos_++].text); break;
      case 2: {
        const std::string& w = toks_[pos_++].text;
        e = Make(w == "None" ? ExprKind::kNone : ExprKind::kBool, w);
        break;
      }
      case 3: e = Make(ExprKind::kName, toks_[pos_++].text); break;
      case 4:
        ++pos_;
        e = Make(ExprKind::kList);
        while (!IsOp("]")) {
          if (!e->args.empty()) ExpectOp(",");
          e->args.push_back(Expression());
        }
        ++pos_;
        break;
      case 5:
        ++pos_;
        e = Expression();
        ExpectOp(")");
        break;
      default: Fail("expected an expression");
    }
    for (;;) {
      const std::size_t post = IsOp("(") ? 0 : IsOp(".") ? 1 : 2;
      p_.Take(kPostfix, post);
      if (post == 2) return e;
      ++pos_;
      if (post == 1) {
        auto m = Make(ExprKind::kMember, Name());
        m->args.push_back(std::move(e));
        e = std::move(m);
        continue;
      }
      ExprPtr call;
      if (e->kind == ExprKind::kName) {
        call = Make(ExprKind::kCall, e->text);
      } else if (e->kind == ExprKind::kMember) {
        call = Make(ExprKind::kMethodCall, e->text);
        call->args.push_back(std::move(e->args[0]));
      } else {
        Fail("only names and methods can be called");
      }
      while (!IsOp(")")) {
        if (call->args.size() > (call->kind == ExprKind::kMethodCall ? 1u : 0u)) ExpectOp(",");
        call->args.push_back(Expression());
      }
      ++pos_;
      e = std::move(call);
    }
  }

  const std::vector<Token>& toks_;
  Probe& p_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

Program Parse(const std::vector<Token>& tokens, Probe& probe) {
  return Parser(tokens, probe).Run();
}

}  // namespace predfuzz::minilang

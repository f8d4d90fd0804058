#include <map>
#include <set>
#include <utility>

#include "targets/minilang/minilang.h"

namespace predfuzz::minilang {
namespace {

constexpr char kNone[] = "<None>";
constexpr char kEmpty[] = "<Empty>";
constexpr int kMaxAncestors = 64;

bool IsList(const std::string& t) { return !t.empty() && t.front() == '['; }
std::string Elem(const std::string& t) { return t.substr(1, t.size() - 2); }
bool IsSpecial(const std::string& t) { return t == "int" || t == "bool" || t == "str"; }

struct ClassInfo {
  std::string super;
  std::map<std::string, std::string> attrs;
  std::map<std::string, const FuncDef*> methods;
};

class TypeChecker {
 public:
  TypeChecker(const Program& prog, Probe& probe) : prog_(prog), p_(probe) {
    for (const char* builtin : {"object", "int", "bool", "str"}) {
      classes_[builtin] = ClassInfo{builtin == std::string("object") ? "" : "object", {}, {}};
    }
  }

  std::vector<std::string> Run() {
    std::set<std::string> globals;
    auto declare = [&](const std::string& name) {
      if (p_.Cond(kDuplicateDecl, !globals.insert(name).second)) {
        Error("Duplicate declaration of identifier: " + name);
      }
    };
    for (const auto& c : prog_.classes) {
      declare(c.name);
      AnalyzeClass(c);
    }
    for (const auto& f : prog_.functions) {
      declare(f.name);
      functions_[f.name] = &f;
    }
    for (const auto& v : prog_.globals) {
      declare(v.name);
      globals_[v.name] = v.type;
    }

    for (const auto& c : prog_.classes) {
      for (const auto& m : c.methods) AnalyzeMethod(c, m);
    }
    for (const auto& v : prog_.globals) AnalyzeVarDef(v);
    for (const auto& f : prog_.functions) AnalyzeFunction(f);
    for (const auto& s : prog_.stmts) AnalyzeStmt(s);
    return std::move(errors_);
  }

 private:
  void Error(std::string message) { errors_.push_back(std::move(message)); }

  bool IsClass(const std::string& t) const { return classes_.count(t) > 0; }
  bool ValidType(const std::string& t) const {
    return IsList(t) ? ValidType(Elem(t)) : IsClass(t);
  }
  void CheckType(const std::string& t) {
    if (!ValidType(t)) Error("Invalid type annotation; there is no class named: " + t);
  }

  std::vector<std::string> Ancestors(std::string t) const {
    std::vector<std::string> chain;
    while (!t.empty() && chain.size() < kMaxAncestors) {
      chain.push_back(t);
      auto it = classes_.find(t);
      if (it == classes_.end()) break;
      t = it->second.super;
    }
    return chain;
  }

  bool Assignable(const std::string& from, const std::string& to) const {
    if (from == to || to == "object") return true;
    if (from == kNone) return !IsSpecial(to);
    if (from == kEmpty) return IsList(to);
    if (IsList(from) && IsList(to)) return Elem(from) == kNone && !IsSpecial(Elem(to));
    for (const auto& a : Ancestors(from)) {
      if (a == to) return true;
    }
    return false;
  }

  std::string Join(const std::string& a, const std::string& b) const {
    if (Assignable(a, b)) return b;
    if (Assignable(b, a)) return a;
    for (const auto& anc : Ancestors(a)) {
      if (Assignable(b, anc)) return anc;
    }
    return "object";
  }

  void AnalyzeClass(const ClassDef& c) {
    ClassInfo info;
    info.super = c.super;
    if (!p_.Cond(kSuperDefined, IsClass(c.super))) {
      Error("Super-class not defined: " + c.super);
      info.super = "object";
    } else if (p_.Cond(kSuperSpecial, IsSpecial(c.super))) {
      Error("Cannot extend special class: " + c.super);
      info.super = "object";
    }
    for (const auto& a : c.attrs) {
      CheckType(a.type);
      info.attrs[a.name] = a.type;
    }
    for (const auto& m : c.methods) {
      if (info.methods.count(m.name) || info.attrs.count(m.name)) {
        Error("Duplicate declaration of identifier: " + m.name);
      }
      info.methods[m.name] = &m;
    }
    classes_[c.name] = std::move(info);
  }

  const FuncDef* FindMethod(const std::string& cls, const std::string& name,
                            bool* inherited = nullptr) const {
    bool first = true;
    for (const auto& a : Ancestors(cls)) {
      auto it = classes_.find(a);
      if (it != classes_.end()) {
        auto m = it->second.methods.find(name);
        if (m != it->second.methods.end()) {
          if (inherited) *inherited = !first;
          return m->second;
        }
      }
      first = false;
    }
    return nullptr;
  }

  const std::string* FindAttr(const std::string& cls, const std::string& name,
                              bool* inherited) const {
    bool first = true;
    for (const auto& a : Ancestors(cls)) {
      auto it = classes_.find(a);
      if (it != classes_.end()) {
        auto attr = it->second.attrs.find(name);
        if (attr != it->second.attrs.end()) {
          *inherited = !first;
          return &attr->second;
        }
      }
      first = false;
    }
    return nullptr;
  }

  static bool SameSignature(const FuncDef& a, const FuncDef& b) {
    if (a.params.size() != b.params.size() || a.return_type != b.return_type) return false;
    for (std::size_t i = 1; i < a.params.size(); ++i) {
      if (a.params[i].type != b.params[i].type) return false;
    }
    return true;
  }

  // DeclarationAnalyzer: method declarations and overriding.
  void AnalyzeMethod(const ClassDef& c, const FuncDef& m) {
    if (!p_.Cond(kSelfParam, !m.params.empty() && m.params[0].type == c.name)) {
      Error("First parameter of the following method must be of the enclosing class: " + m.name);
    }
    const FuncDef* parent = FindMethod(classes_[c.name].super, m.name);
    if (p_.Cond(kParentMethod, parent != nullptr)) {
      if (p_.Cond(kSignature, !SameSignature(*parent, m))) {
        Error("Method overridden with different type signature: " + m.name);
      }
    }
    AnalyzeFunction(m);
  }

  void AnalyzeVarDef(const VarDef& v) {
    CheckType(v.type);
    const std::string t = AnalyzeExpr(*v.init);
    if (!p_.Cond(kAssignCompat, Assignable(t, v.type))) {
      Error("Expected type `" + v.type + "`; got type `" + t + "`");
    }
  }

  void AnalyzeFunction(const FuncDef& f) {
    std::map<std::string, std::string> locals;
    for (const auto& param : f.params) {
      CheckType(param.type);
      if (!locals.emplace(param.name, param.type).second) {
        Error("Duplicate declaration of identifier: " + param.name);
      }
    }
    CheckType(f.return_type == kNone ? "object" : f.return_type);
    for (const auto& v : f.locals) {
      if (!locals.emplace(v.name, v.type).second) {
        Error("Duplicate declaration of identifier: " + v.name);
      }
    }
    auto* saved_locals = locals_;
    const auto* saved_fn = function_;
    locals_ = &locals;
    function_ = &f;
    for (const auto& v : f.locals) AnalyzeVarDef(v);
    for (const auto& s : f.body) AnalyzeStmt(s);
    locals_ = saved_locals;
    function_ = saved_fn;
  }

  void AnalyzeStmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::kPass: return;
      case StmtKind::kExpr: AnalyzeExpr(*s.value); return;
      case StmtKind::kAssign: {
        const std::string target = AnalyzeExpr(*s.target);
        const std::string value = AnalyzeExpr(*s.value);
        if (!p_.Cond(kAssignCompat, Assignable(value, target))) {
          Error("Expected type `" + target + "`; got type `" + value + "`");
        }
        return;
      }
      case StmtKind::kReturn: {
        const std::string t = s.value ? AnalyzeExpr(*s.value) : kNone;
        if (!function_) {
          Error("Return statement cannot appear at the top level");
          return;
        }
        if (!p_.Cond(kReturnCompat, Assignable(t, function_->return_type))) {
          Error("Expected type `" + function_->return_type + "`; got type `" + t + "`");
        }
        return;
      }
      case StmtKind::kIf: {
        if (!p_.Cond(kCondition, AnalyzeExpr(*s.value) == "bool")) {
          Error("Condition expression cannot be of non-bool type");
        }
        for (const auto& t : s.then_body) AnalyzeStmt(t);
        for (const auto& e : s.else_body) AnalyzeStmt(e);
        return;
      }
    }
  }

  std::string AnalyzeName(const std::string& name) {
    std::size_t kind = 2;
    std::string type = "object";
    if (locals_ && locals_->count(name)) {
      kind = 0;
      type = locals_->at(name);
    } else if (globals_.count(name)) {
      kind = 1;
      type = globals_.at(name);
    }
    p_.Take(kName, kind);
    if (kind == 2) Error("Not a variable: " + name);
    return type;
  }

  // Applies + to two operand types.
  std::string AnalyzePlus(const std::string& l, const std::string& r) {
    if (p_.Cond(kPlusSame, l == r)) {
      const std::size_t kind = l == "int" ? 0 : l == "str" ? 1 : IsList(l) ? 2 : 3;
      p_.Take(kPlusKind, kind);
      if (kind != 3) return l;
    } else {
      const bool left_list = IsList(l) || l == kEmpty;
      const bool right_list = IsList(r) || r == kEmpty;
      if (p_.Cond(kPlusLists, left_list && right_list)) {
        if (l == kEmpty) return r;
        if (r == kEmpty) return l;
        return "[" + LubListElements(Elem(l), Elem(r)) + "]";
      }
    }
    Error("Cannot apply operator `+` on types `" + l + "` and `" + r + "`");
    return l == "int" || r == "int" ? "int" : "object";
  }

  std::string LubListElements(const std::string& a, const std::string& b) const {
    return Join(a, b);
  }

  void CheckArgs(const FuncDef& f, const std::vector<ExprPtr>& args, std::size_t first_arg,
                 std::size_t first_param) {
    const std::size_t given = args.size() - first_arg;
    const std::size_t wanted = f.params.size() - std::min(first_param, f.params.size());
    if (!p_.Cond(kArity, given == wanted)) {
      Error("Expected " + std::to_string(wanted) + " arguments; got " + std::to_string(given));
      for (std::size_t i = first_arg; i < args.size(); ++i) AnalyzeExpr(*args[i]);
      return;
    }
    for (std::size_t i = 0; i < given; ++i) {
      const std::string t = AnalyzeExpr(*args[first_arg + i]);
      const std::string& want = f.params[first_param + i].type;
      if (!p_.Cond(kArgType, Assignable(t, want))) {
        Error("Expected type `" + want + "`; got type `" + t + "` in parameter " +
              std::to_string(i));
      }
    }
  }

  std::string AnalyzeExpr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::kInt: return "int";
      case ExprKind::kStr: return "str";
      case ExprKind::kBool: return "bool";
      case ExprKind::kNone: return kNone;
      case ExprKind::kName: return AnalyzeName(e.text);
      case ExprKind::kList: {
        if (e.args.empty()) return kEmpty;
        std::string t = AnalyzeExpr(*e.args[0]);
        for (std::size_t i = 1; i < e.args.size(); ++i) t = Join(t, AnalyzeExpr(*e.args[i]));
        return "[" + t + "]";
      }
      case ExprKind::kPlus: {
        const std::string l = AnalyzeExpr(*e.args[0]);
        const std::string r = AnalyzeExpr(*e.args[1]);
        return AnalyzePlus(l, r);
      }
      case ExprKind::kCompare: {
        const std::string l = AnalyzeExpr(*e.args[0]);
        const std::string r = AnalyzeExpr(*e.args[1]);
        const bool ok = e.text == "==" ? (l == r && IsSpecial(l)) : (l == "int" && r == "int");
        if (!ok) {
          Error("Cannot apply operator `" + e.text + "` on types `" + l + "` and `" + r + "`");
        }
        return "bool";
      }
      case ExprKind::kCall: {
        auto fn = functions_.find(e.text);
        const bool is_class = !IsSpecial(e.text) && IsClass(e.text);
        const std::size_t kind = fn != functions_.end() ? 0 : is_class ? 1 : 2;
        p_.Take(kCallTarget, kind);
        if (kind == 0) {
          CheckArgs(*fn->second, e.args, 0, 0);
          return fn->second->return_type;
        }
        if (kind == 1) {
          if (!p_.Cond(kArity, e.args.empty())) Error("Constructors take no arguments");
          return e.text;
        }
        for (const auto& a : e.args) AnalyzeExpr(*a);
        Error("Not a function or class: " + e.text);
        return "object";
      }
      case ExprKind::kMember: {
        const std::string recv = AnalyzeExpr(*e.args[0]);
        bool inherited = false;
        const std::string* attr = IsList(recv) ? nullptr : FindAttr(recv, e.text, &inherited);
        p_.Take(kMember, attr ? (inherited ? 1 : 0) : 2);
        if (!attr) {
          Error("There is no attribute named `" + e.text + "` in class `" + recv + "`");
          return "object";
        }
        return *attr;
      }
      case ExprKind::kMethodCall: {
        const std::string recv = AnalyzeExpr(*e.args[0]);
        bool inherited = false;
        const FuncDef* m = IsList(recv) ? nullptr : FindMethod(recv, e.text, &inherited);
        p_.Take(kMember, m ? (inherited ? 1 : 0) : 2);
        if (!m) {
          for (std::size_t i = 1; i < e.args.size(); ++i) AnalyzeExpr(*e.args[i]);
          Error("There is no method named `" + e.text + "` in class `" + recv + "`");
          return "object";
        }
        CheckArgs(*m, e.args, 1, 1);
        return m->return_type;
      }
    }
    return "object";
  }

  const Program& prog_;
  Probe& p_;
  std::map<std::string, ClassInfo> classes_;
  std::map<std::string, const FuncDef*> functions_;
  std::map<std::string, std::string> globals_;
  std::map<std::string, std::string>* locals_ = nullptr;
  const FuncDef* function_ = nullptr;
  std::vector<std::string> errors_;
};

}  // namespace

std::vector<std::string> Check(const Program& program, Probe& probe) {
  return TypeChecker(program, probe).Run();
}

}  // namespace predfuzz::minilang

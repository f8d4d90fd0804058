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
#include <string>
#include <vector>

#include "gen/generator.h"

namespace predfuzz::gen_internal {
namespace {

// "*" asks for an expression of any type.
constexpr char kAny[] = "*";

struct Var {
  std::string name;
  std::string type;
};

struct Signature {
  std::vector<std::string> params;  // excluding self
  std::string ret;
};

struct Callable {
  std::string call_prefix;  // "f0(" or "C1().m0("
  Signature sig;
};

struct MinilangKnobs {
  double stmt_assign, stmt_expr, stmt_if;
  double expr_literal, expr_var, expr_plus, expr_call;
  double plus_same, plus_mixed, plus_mismatch;
  double override_match, override_mismatch;
  bool functions, classes, inheritance, method_override, mismatch_signature, typed_returns,
      lists, list_plus, if_stmt;
  std::int64_t max_depth, max_classes, max_methods, max_stmts, max_functions, max_vars;
};

class ProgramWriter {
 public:
  ProgramWriter(const MinilangKnobs& k, ParamStream& s, std::string& out) : k_(k), s_(s), out_(out) {}

  void Program() {
    if (k_.classes) Classes();
    if (k_.functions) Functions();
    const auto vars = s_.NextInt(1, k_.max_vars);
    for (std::int64_t i = 0; i < vars; ++i) {
      Var v{"v" + std::to_string(i), ValueType()};
      out_ += v.name + ": " + v.type + " = " + Initializer(v.type) + "\n";
      globals_.push_back(std::move(v));
    }
    const auto stmts = s_.NextInt(1, k_.max_stmts);
    for (std::int64_t i = 0; i < stmts; ++i) Statement(0, globals_, k_.max_depth);
  }

 private:
  static std::string Indent(int level) { return std::string(2 * level, ' '); }

  std::string ValueType() {
    static const char* kScalars[] = {"int", "str", "bool"};
    const auto hi = k_.lists ? 4 : 2;
    const auto pick = s_.NextInt(0, hi);
    if (pick < 3) return kScalars[pick];
    return pick == 3 ? "[int]" : "[str]";
  }

  std::string Initializer(const std::string& type) {
    if (type == "int") return std::to_string(s_.NextInt(0, 99));
    if (type == "str") return "\"s" + std::to_string(s_.NextInt(0, 9)) + "\"";
    if (type == "bool") return s_.NextBool() ? "True" : "False";
    return "None";
  }

  void Classes() {
    const std::int64_t min_classes = k_.inheritance && k_.method_override ? 2 : 1;
    const auto n = s_.NextInt(min_classes, std::max(min_classes, k_.max_classes));
    for (std::int64_t i = 0; i < n; ++i) {
      const std::string name = "C" + std::to_string(i);
      std::string parent = "object";
      if (k_.inheritance && i > 0) parent = "C" + std::to_string(s_.NextInt(0, i - 1));
      out_ += "class " + name + "(" + parent + "):\n";
      out_ += Indent(1) + "a" + std::to_string(i) + ": int = " + std::to_string(s_.NextInt(0, 9)) + "\n";

      // Every class declares m0 first; a subclass's m0 overrides its parent's
      // only when overriding is enabled.
      const auto methods = s_.NextInt(1, k_.max_methods);
      Signature m0;
      if (parent != "object" && k_.method_override) {
        m0 = m0_sig_[static_cast<std::size_t>(std::stoi(parent.substr(1)))];
        const double choice[] = {k_.override_match, k_.mismatch_signature ? k_.override_mismatch : 0.0};
        if ((choice[0] > 0 || choice[1] > 0) && s_.ChooseWeighted(choice) == 1) Mismatch(m0);
      } else {
        m0 = RandomSignature();
      }
      m0_sig_.push_back(m0);
      const bool owns_m0 = parent == "object" || k_.method_override;
      for (std::int64_t j = 0; j < methods; ++j) {
        std::string mname;
        Signature sig;
        if (j == 0 && owns_m0) {
          mname = "m0";
          sig = m0;
        } else {
          mname = "c" + std::to_string(i) + "m" + std::to_string(j);
          sig = RandomSignature();
        }
        Def(1, mname, name, sig);
        methods_.push_back({name + "()." + mname + "(", sig});
      }
      classes_.push_back(name);
    }
  }

  Signature RandomSignature() {
    Signature sig;
    const auto params = s_.NextInt(0, 2);
    for (std::int64_t p = 0; p < params; ++p) sig.params.push_back(ValueType());
    sig.ret = ValueType();
    return sig;
  }

  void Mismatch(Signature& sig) {
    switch (s_.NextInt(0, 2)) {
      case 0:
        if (!sig.params.empty()) {
          sig.params[0] = sig.params[0] == "int" ? "str" : "int";
          break;
        }
        [[fallthrough]];
      case 1:
        sig.ret = sig.ret == "int" ? "str" : "int";
        break;
      default:
        sig.params.push_back("int");
        break;
    }
  }

  void Functions() {
    const auto n = s_.NextInt(1, k_.max_functions);
    for (std::int64_t i = 0; i < n; ++i) {
      const std::string name = "f" + std::to_string(i);
      Signature sig = RandomSignature();
      Def(0, name, "", sig);
      functions_.push_back({name + "(", sig});
    }
  }

  void Def(int level, const std::string& name, const std::string& self_type, const Signature& sig) {
    std::vector<Var> scope = globals_;
    out_ += Indent(level) + "def " + name + "(";
    std::vector<std::string> params;
    if (!self_type.empty()) params.push_back("self: " + self_type);
    for (std::size_t p = 0; p < sig.params.size(); ++p) {
      Var v{"p" + std::to_string(p), sig.params[p]};
      params.push_back(v.name + ": " + v.type);
      scope.push_back(std::move(v));
    }
    for (std::size_t p = 0; p < params.size(); ++p) out_ += (p ? ", " : "") + params[p];
    out_ += ") -> " + sig.ret + ":\n";
    const auto stmts = s_.NextInt(0, std::max<std::int64_t>(0, k_.max_stmts / 2));
    for (std::int64_t i = 0; i < stmts; ++i) Statement(level + 1, scope, k_.max_depth - 1);
    const std::string ret_type = k_.typed_returns ? sig.ret : ValueType();
    out_ += Indent(level + 1) + "return " + Expression(ret_type, scope, k_.max_depth - 1) + "\n";
  }

  void Statement(int level, const std::vector<Var>& scope, std::int64_t depth) {
    const double w[] = {scope.empty() ? 0.0 : k_.stmt_assign, k_.stmt_expr,
                        (k_.if_stmt && depth > 0) ? k_.stmt_if : 0.0};
    std::size_t kind = 1;
    if (w[0] + w[1] + w[2] > 0) kind = s_.ChooseWeighted(w);
    switch (kind) {
      case 0: {
        const Var& v = scope[static_cast<std::size_t>(s_.NextInt(0, static_cast<std::int64_t>(scope.size()) - 1))];
        out_ += Indent(level) + v.name + " = " + Expression(v.type, scope, depth) + "\n";
        break;
      }
      case 1:
        out_ += Indent(level) + Expression(kAny, scope, depth) + "\n";
        break;
      default:
        out_ += Indent(level) + "if " + Expression("bool", scope, depth - 1) + ":\n";
        Statement(level + 1, scope, depth - 1);
        if (s_.NextBool()) {
          out_ += Indent(level) + "else:\n";
          Statement(level + 1, scope, depth - 1);
        }
        break;
    }
  }

  std::vector<const Callable*> CallablesReturning(const std::string& type) const {
    std::vector<const Callable*> out;
    for (const auto& f : functions_) {
      if (type == kAny || f.sig.ret == type) out.push_back(&f);
    }
    for (const auto& m : methods_) {
      if (type == kAny || m.sig.ret == type) out.push_back(&m);
    }
    return out;
  }

  std::string Expression(const std::string& type, const std::vector<Var>& scope, std::int64_t depth) {
    std::vector<const Var*> vars;
    for (const auto& v : scope) {
      if (type == kAny || v.type == type) vars.push_back(&v);
    }
    const auto callables = depth > 0 ? CallablesReturning(type) : std::vector<const Callable*>{};
    const bool plus_ok = depth > 0 && type != "bool";
    const double w[] = {k_.expr_literal, vars.empty() ? 0.0 : k_.expr_var,
                        plus_ok ? k_.expr_plus : 0.0, callables.empty() ? 0.0 : k_.expr_call};
    std::size_t kind = 0;
    if (w[0] + w[1] + w[2] + w[3] > 0) kind = s_.ChooseWeighted(w);
    switch (kind) {
      case 1:
        return vars[static_cast<std::size_t>(s_.NextInt(0, static_cast<std::int64_t>(vars.size()) - 1))]->name;
      case 2:
        return Plus(type, scope, depth - 1);
      case 3: {
        const Callable& c =
            *callables[static_cast<std::size_t>(s_.NextInt(0, static_cast<std::int64_t>(callables.size()) - 1))];
        std::string call = c.call_prefix;
        for (std::size_t i = 0; i < c.sig.params.size(); ++i) {
          call += (i ? ", " : "") + Expression(c.sig.params[i], scope, depth - 1);
        }
        return call + ")";
      }
      default:
        return Literal(type == kAny ? ValueType() : type, scope, depth);
    }
  }

  std::string Literal(const std::string& type, const std::vector<Var>& scope, std::int64_t depth) {
    if (type == "int") return std::to_string(s_.NextInt(0, 99));
    if (type == "str") return "\"s" + std::to_string(s_.NextInt(0, 9)) + "\"";
    if (type == "bool") {
      if (depth > 0 && s_.NextBool()) {
        return Expression("int", scope, depth - 1) + " < " + Expression("int", scope, depth - 1);
      }
      return s_.NextBool() ? "True" : "False";
    }
    if (type.size() > 2 && type.front() == '[') {
      const std::string elem = type.substr(1, type.size() - 2);
      std::string out = "[";
      const auto n = s_.NextInt(0, 2);
      for (std::int64_t i = 0; i < n; ++i) {
        out += (i ? ", " : "") + Literal(elem == "object" ? "int" : elem, scope, depth - 1);
      }
      return out + "]";
    }
    return "None";
  }

  std::string Plus(const std::string& type, const std::vector<Var>& scope, std::int64_t depth) {
    const bool any = type == kAny;
    const bool list = type.size() > 2 && type.front() == '[';
    const double w[] = {k_.plus_same,
                        (k_.lists && k_.list_plus && (any || type == "[object]")) ? k_.plus_mixed : 0.0,
                        any ? k_.plus_mismatch : 0.0};
    std::size_t kind = 0;
    if (w[0] + w[1] + w[2] > 0) kind = s_.ChooseWeighted(w);
    switch (kind) {
      case 1:
        return "[" + Literal("int", scope, 0) + "] + [" + Literal("str", scope, 0) + "]";
      case 2:
        return Expression("int", scope, depth) + " + " + Expression("str", scope, depth);
      default: {
        std::string t = type;
        if (any) {
          const auto pick = s_.NextInt(0, k_.lists && k_.list_plus ? 2 : 1);
          t = pick == 0 ? "int" : pick == 1 ? "str" : "[int]";
        } else if (!list && t != "int" && t != "str") {
          t = "int";
        }
        return Expression(t, scope, depth) + " + " + Expression(t, scope, depth);
      }
    }
  }

  const MinilangKnobs& k_;
  ParamStream& s_;
  std::string& out_;
  std::vector<Var> globals_;
  std::vector<std::string> classes_;
  std::vector<Signature> m0_sig_;
  std::vector<Callable> functions_;
  std::vector<Callable> methods_;
};

}  // namespace

void GenerateMinilang(const GeneratorConfig& c, ParamStream& s, std::string& out) {
  const MinilangKnobs k{c.weight("stmt_assign"),
                        c.weight("stmt_expr"),
                        c.weight("stmt_if"),
                        c.weight("expr_literal"),
                        c.weight("expr_var"),
                        c.weight("expr_plus"),
                        c.weight("expr_call"),
                        c.weight("plus_same_type"),
                        c.weight("plus_mixed_lists"),
                        c.weight("plus_mismatch"),
                        c.weight("override_match"),
                        c.weight("override_mismatch"),
                        c.toggle("enable_functions"),
                        c.toggle("enable_classes"),
                        c.toggle("enable_inheritance"),
                        c.toggle("enable_method_override"),
                        c.toggle("mismatch_signature"),
                        c.toggle("typed_returns"),
                        c.toggle("enable_lists"),
                        c.toggle("enable_list_plus"),
                        c.toggle("enable_if"),
                        c.bound("max_depth"),
                        c.bound("max_classes"),
                        c.bound("max_methods"),
                        c.bound("max_stmts"),
                        c.bound("max_functions"),
                        c.bound("max_vars")};
  ProgramWriter(k, s, out).Program();
}

}  // namespace predfuzz::gen_internal

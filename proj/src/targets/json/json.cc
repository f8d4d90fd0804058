#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <string>

#include "targets/embedded.h"
#include "targets/target.h"

namespace predfuzz::targets_internal {
namespace {

constexpr char kClass[] = "json.JsonReader";
constexpr int kDeepNesting = 3;
constexpr int kMaxNesting = 256;

enum JsonSite {
  kValueKind,
  kDepthGate,
  kObjectEmpty,
  kKeyQuote,
  kColon,
  kObjectSep,
  kDuplicateKey,
  kArrayEmpty,
  kArraySep,
  kStringChar,
  kEscape,
  kHexDigit,
  kMinus,
  kIntegerPart,
  kFraction,
  kFractionDigits,
  kExponent,
  kExponentSign,
  kExponentDigits,
  kLiteral,
  kTrailing,
  kNumSites,
};

const BranchTable& Table() {
  static const BranchTable* table = [] {
    std::vector<PredicateMeta> m = {
        Site(kClass, "parseValue", 20, {21, 22, 23, 24, 25, 26, 27, 28}),
        Site(kClass, "parseValue", 30, {31, 32}),
        Site(kClass, "parseObject", 40, {41, 42}),
        Site(kClass, "parseObject", 43, {44, 45}),
        Site(kClass, "parseObject", 46, {47, 48}),
        Site(kClass, "parseObject", 49, {50, 51, 52}),
        Site(kClass, "parseObject", 53, {54, 55}),
        Site(kClass, "parseArray", 60, {61, 62}),
        Site(kClass, "parseArray", 63, {64, 65, 66}),
        Site(kClass, "parseString", 70, {71, 72, 73, 74}),
        Site(kClass, "parseString", 75, {76, 77, 78}),
        Site(kClass, "parseString", 79, {80, 81}),
        Site(kClass, "parseNumber", 85, {86, 87}),
        Site(kClass, "parseNumber", 88, {89, 90, 91}),
        Site(kClass, "parseNumber", 92, {93, 94}),
        Site(kClass, "parseNumber", 95, {96, 97}),
        Site(kClass, "parseNumber", 98, {99, 100}),
        Site(kClass, "parseNumber", 101, {102, 103}),
        Site(kClass, "parseNumber", 104, {105, 106}),
        Site(kClass, "parseLiteral", 110, {111, 112}),
        Site(kClass, "parse", 120, {121, 122}),
    };
    return new BranchTable(std::move(m));
  }();
  return *table;
}

struct SyntaxError {
  std::size_t offset;
};

bool IsDigit(int c) { return c >= '0' && c <= '9'; }
bool IsHex(int c) {
  return IsDigit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

class JsonReader {
 public:
  JsonReader(std::span<const std::uint8_t> in, ExecutionTrace& trace) : in_(in), p_(trace) {}

  void Parse() {
    SkipSpace();
    Value(0);
    SkipSpace();
    if (p_.Cond(kTrailing, pos_ < in_.size())) Fail();
  }

 private:
  int Peek() const { return pos_ < in_.size() ? in_[pos_] : -1; }
  [[noreturn]] void Fail() const { throw SyntaxError{pos_}; }

  void SkipSpace() {
    while (pos_ < in_.size() &&
           (in_[pos_] == ' ' || in_[pos_] == '\t' || in_[pos_] == '\n' || in_[pos_] == '\r')) {
      ++pos_;
    }
  }

  void Value(int depth) {
    const int c = Peek();
    std::size_t kind = 7;
    switch (c) {
      case '{': kind = 0; break;
      case '[': kind = 1; break;
      case '"': kind = 2; break;
      case 't': kind = 4; break;
      case 'f': kind = 5; break;
      case 'n': kind = 6; break;
      default:
        if (c == '-' || IsDigit(c)) kind = 3;
        break;
    }
    p_.Take(kValueKind, kind);
    switch (kind) {
      case 0:
      case 1:
        p_.Cond(kDepthGate, depth + 1 > kDeepNesting);
        if (depth + 1 > kMaxNesting) Fail();
        return kind == 0 ? Object(depth + 1) : Array(depth + 1);
      case 2: return String(nullptr);
      case 3: return Number();
      case 4: return Literal("true");
      case 5: return Literal("false");
      case 6: return Literal("null");
      default: Fail();
    }
  }

  void Object(int depth) {
    ++pos_;
    SkipSpace();
    if (p_.Cond(kObjectEmpty, Peek() == '}')) {
      ++pos_;
      return;
    }
    std::set<std::string> keys;
    for (;;) {
      if (!p_.Cond(kKeyQuote, Peek() == '"')) Fail();
      std::string key;
      String(&key);
      p_.Cond(kDuplicateKey, !keys.insert(key).second);
      SkipSpace();
      if (!p_.Cond(kColon, Peek() == ':')) Fail();
      ++pos_;
      SkipSpace();
      Value(depth);
      SkipSpace();
      const int c = Peek();
      const std::size_t sep = c == ',' ? 0 : c == '}' ? 1 : 2;
      p_.Take(kObjectSep, sep);
      if (sep == 2) Fail();
      ++pos_;
      if (sep == 1) return;
      SkipSpace();
    }
  }

  void Array(int depth) {
    ++pos_;
    SkipSpace();
    if (p_.Cond(kArrayEmpty, Peek() == ']')) {
      ++pos_;
      return;
    }
    for (;;) {
      Value(depth);
      SkipSpace();
      const int c = Peek();
      const std::size_t sep = c == ',' ? 0 : c == ']' ? 1 : 2;
      p_.Take(kArraySep, sep);
      if (sep == 2) Fail();
      ++pos_;
      if (sep == 1) return;
      SkipSpace();
    }
  }

  void String(std::string* text) {
    ++pos_;
    for (;;) {
      const int c = Peek();
      const std::size_t kind = c == '"' ? 0 : c == '\\' ? 1 : (c < 0x20) ? 2 : 3;
      p_.Take(kStringChar, kind);
      if (kind == 2) Fail();
      ++pos_;
      if (kind == 0) return;
      if (kind == 3) {
        if (text) *text += static_cast<char>(c);
        continue;
      }
      const int e = Peek();
      const bool simple = e == '"' || e == '\\' || e == '/' || e == 'b' || e == 'f' ||
                          e == 'n' || e == 'r' || e == 't';
      const std::size_t esc = simple ? 0 : e == 'u' ? 1 : 2;
      p_.Take(kEscape, esc);
      if (esc == 2) Fail();
      ++pos_;
      if (text) *text += static_cast<char>(e);
      if (esc == 1) {
        for (int i = 0; i < 4; ++i) {
          if (!p_.Cond(kHexDigit, IsHex(Peek()))) Fail();
          if (text) *text += static_cast<char>(in_[pos_]);
          ++pos_;
        }
      }
    }
  }

  void Number() {
    if (p_.Cond(kMinus, Peek() == '-')) ++pos_;
    const int c = Peek();
    const std::size_t lead = c == '0' ? 0 : IsDigit(c) ? 1 : 2;
    p_.Take(kIntegerPart, lead);
    if (lead == 2) Fail();
    ++pos_;
    if (lead == 1) {
      while (IsDigit(Peek())) ++pos_;
    }
    if (p_.Cond(kFraction, Peek() == '.')) {
      ++pos_;
      if (!p_.Cond(kFractionDigits, IsDigit(Peek()))) Fail();
      while (IsDigit(Peek())) ++pos_;
    }
    if (p_.Cond(kExponent, Peek() == 'e' || Peek() == 'E')) {
      ++pos_;
      if (p_.Cond(kExponentSign, Peek() == '+' || Peek() == '-')) ++pos_;
      if (!p_.Cond(kExponentDigits, IsDigit(Peek()))) Fail();
      while (IsDigit(Peek())) ++pos_;
    }
  }

  void Literal(std::string_view word) {
    const bool match = in_.size() - pos_ >= word.size() &&
                       std::equal(word.begin(), word.end(), in_.begin() + static_cast<std::ptrdiff_t>(pos_));
    if (!p_.Cond(kLiteral, match)) Fail();
    pos_ += word.size();
  }

  std::span<const std::uint8_t> in_;
  Probe p_;
  std::size_t pos_ = 0;
};

RunOutcome Parse(std::span<const std::uint8_t> input, ExecutionTrace& trace) {
  try {
    JsonReader(input, trace).Parse();
  } catch (const SyntaxError& e) {
    return {RunStatus::kRejected, "offset " + std::to_string(e.offset), {}};
  }
  return {RunStatus::kOk, "", {}};
}

}  // namespace

const TargetBinding& JsonTarget() {
  static const TargetBinding* binding = [] {
    static_assert(kNumSites == 21);
    auto* t = new TargetBinding;
    t->target_id = "json";
    t->run = Parse;
    t->branches = &Table();
    t->cfg_description = EmbeddedTargetFile("json/json.cfg");
    t->source_files = {"json/json.cc"};
    t->entry_point = "parse";
    const std::string id = std::string(kClass) + ".";
    t->refine_hints = {
        {id + "parseValue:20", 21, {"top_level_container"}, "value_object", 4},
        {id + "parseValue:20", 22, {}, "value_array", 4},
        {id + "parseValue:20", 28, {}, "syntax_error", 4},
        {id + "parseValue:30", 31, {}, "value_object", 4},
        {id + "parseString:75", 76, {"emit_escapes"}, "", 1},
        {id + "parseString:75", 77, {"emit_unicode_escapes"}, "", 1},
        {id + "parseNumber:85", 86, {"emit_negative"}, "", 1},
        {id + "parseNumber:92", 93, {"emit_fractions"}, "", 1},
        {id + "parseNumber:98", 99, {"emit_exponents"}, "", 1},
        {id + "parse:120", 121, {}, "syntax_error", 4},
    };
    return t;
  }();
  return *binding;
}

}  // namespace predfuzz::targets_internal

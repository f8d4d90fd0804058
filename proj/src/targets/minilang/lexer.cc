#include <cctype>
#include <vector>

#include "targets/minilang/minilang.h"

namespace predfuzz::minilang {
namespace {

constexpr std::string_view kKeywords[] = {"class", "def",  "return", "pass", "if",
                                          "else",  "True", "False",  "None"};
constexpr std::size_t kMaxIntDigits = 9;

bool IsKeyword(std::string_view word) {
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

bool IsNameStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool IsNameChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  Lexer(std::string_view src, Probe& probe) : src_(src), p_(probe) {}

  std::vector<Token> Run() {
    while (pos_ < src_.size()) Line();
    while (indents_.size() > 1) {
      indents_.pop_back();
      Emit(Tok::kDedent, "");
    }
    p_.Take(kTokenKind, 5);
    Emit(Tok::kEof, "");
    return std::move(out_);
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw PhaseError{"lex", "line " + std::to_string(line_) + ": " + what};
  }

  void Emit(Tok kind, std::string text) { out_.push_back({kind, std::move(text), line_}); }

  void Line() {
    ++line_;
    std::size_t width = 0;
    while (pos_ < src_.size() && src_[pos_] == ' ') {
      ++pos_;
      ++width;
    }
    // Blank and comment-only lines carry no indentation.
    if (pos_ >= src_.size() || src_[pos_] == '\n' || src_[pos_] == '#') {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      if (pos_ < src_.size()) ++pos_;
      return;
    }
    Indentation(width);
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      if (src_[pos_] == ' ') {
        ++pos_;
        continue;
      }
      if (src_[pos_] == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        break;
      }
      NextToken();
    }
    if (pos_ < src_.size()) ++pos_;
    p_.Take(kTokenKind, 4);
    Emit(Tok::kNewline, "");
  }

  void Indentation(std::size_t width) {
    const std::size_t kind = width > indents_.back() ? 0 : width < indents_.back() ? 1 : 2;
    p_.Take(kIndent, kind);
    if (kind == 0) {
      indents_.push_back(width);
      Emit(Tok::kIndent, "");
    } else if (kind == 1) {
      while (width < indents_.back()) {
        indents_.pop_back();
        Emit(Tok::kDedent, "");
      }
      if (!p_.Cond(kDedentMatch, width == indents_.back())) Fail("inconsistent dedent");
    }
  }

  void NextToken() {
    const char c = src_[pos_];
    if (IsNameStart(c)) {
      p_.Take(kTokenKind, 0);
      const std::size_t start = pos_;
      while (pos_ < src_.size() && IsNameChar(src_[pos_])) ++pos_;
      std::string word(src_.substr(start, pos_ - start));
      const Tok kind = IsKeyword(word) ? Tok::kKeyword : Tok::kName;
      Emit(kind, std::move(word));
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      p_.Take(kTokenKind, 1);
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ - start > kMaxIntDigits) Fail("integer literal too large");
      Emit(Tok::kInt, std::string(src_.substr(start, pos_ - start)));
    } else if (c == '"') {
      p_.Take(kTokenKind, 2);
      const std::size_t start = ++pos_;
      while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') ++pos_;
      if (!p_.Cond(kStringEnd, pos_ < src_.size() && src_[pos_] == '"')) {
        Fail("unterminated string");
      }
      Emit(Tok::kString, std::string(src_.substr(start, pos_ - start)));
      ++pos_;
    } else if (auto op = Operator(); !op.empty()) {
      p_.Take(kTokenKind, 3);
      pos_ += op.size();
      Emit(Tok::kOp, std::string(op));
    } else {
      p_.Take(kTokenKind, 6);
      Fail("unexpected character");
    }
  }

  std::string_view Operator() const {
    static constexpr std::string_view kOps[] = {"->", "==", "(", ")", "[", "]", ":",
                                                ",",  ".",  "=", "+", "<"};
    for (auto op : kOps) {
      if (src_.substr(pos_, op.size()) == op) return op;
    }
    return {};
  }

  std::string_view src_;
  Probe& p_;
  std::size_t pos_ = 0;
  int line_ = 0;
  std::vector<std::size_t> indents_{0};
  std::vector<Token> out_;
};

}  // namespace

std::vector<Token> Tokenize(std::string_view source, Probe& probe) {
  return Lexer(source, probe).Run();
}

}  // namespace predfuzz::minilang

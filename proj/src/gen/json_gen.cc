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

#include <string>

#include "gen/generator.h"

namespace predfuzz::gen_internal {
namespace {

// Production order matters: an all-zero stream takes the first eligible
// alternative at every choice, so the top-level container case yields "{}".
enum Kind { kObject, kArray, kString, kNumber, kTrue, kFalse, kNull, kNumKinds };

struct JsonKnobs {
  double kind_weights[kNumKinds];
  bool container_top, escapes, unicode, fractions, exponents, negative, whitespace;
  std::int64_t max_depth, max_len, max_string_len;
};

class JsonWriter {
 public:
  JsonWriter(const JsonKnobs& k, ParamStream& s, std::string& out) : k_(k), s_(s), out_(out) {}

  void Document() {
    Space();
    if (k_.container_top) {
      double top[] = {k_.kind_weights[kObject], k_.kind_weights[kArray]};
      if (top[0] + top[1] <= 0) top[0] = 1;
      Value(s_.ChooseWeighted(top) == 0 ? kObject : kArray, k_.max_depth);
    } else {
      Value(PickKind(k_.max_depth), k_.max_depth);
    }
    Space();
  }

 private:
  Kind PickKind(std::int64_t depth) {
    double w[kNumKinds];
    double terminal_sum = 0;
    for (int i = 0; i < kNumKinds; ++i) {
      const bool container = i == kObject || i == kArray;
      w[i] = (container && depth <= 0) ? 0 : k_.kind_weights[i];
      if (!container) terminal_sum += w[i];
    }
    double total = terminal_sum + w[kObject] + w[kArray];
    if (total <= 0) return kNull;
    return static_cast<Kind>(s_.ChooseWeighted(w));
  }

  void Value(Kind kind, std::int64_t depth) {
    switch (kind) {
      case kObject: return Object(depth - 1);
      case kArray: return Array(depth - 1);
      case kString: return String();
      case kNumber: return Number();
      case kTrue: out_ += "true"; return;
      case kFalse: out_ += "false"; return;
      default: out_ += "null"; return;
    }
  }

  void Object(std::int64_t depth) {
    out_ += '{';
    const auto n = s_.NextInt(0, k_.max_len);
    for (std::int64_t i = 0; i < n; ++i) {
      if (i) out_ += ',';
      Space();
      // A small key pool makes duplicate keys reachable.
      out_ += "\"k" + std::to_string(s_.NextInt(0, k_.max_len)) + "\"";
      Space();
      out_ += ':';
      Space();
      Value(PickKind(depth), depth);
      Space();
    }
    out_ += '}';
  }

  void Array(std::int64_t depth) {
    out_ += '[';
    const auto n = s_.NextInt(0, k_.max_len);
    for (std::int64_t i = 0; i < n; ++i) {
      if (i) out_ += ',';
      Space();
      Value(PickKind(depth), depth);
      Space();
    }
    out_ += ']';
  }

  void String() {
    static constexpr char kSimpleEscapes[] = "\"\\/bfnrt";
    static constexpr char kHex[] = "0123456789abcdefABCDEF";
    out_ += '"';
    const auto n = s_.NextInt(0, k_.max_string_len);
    for (std::int64_t i = 0; i < n; ++i) {
      const double w[] = {6, k_.escapes ? 1.0 : 0.0, k_.unicode ? 1.0 : 0.0};
      switch (s_.ChooseWeighted(w)) {
        case 0:
          out_ += static_cast<char>('a' + s_.NextInt(0, 25));
          break;
        case 1:
          out_ += '\\';
          out_ += kSimpleEscapes[s_.NextInt(0, 7)];
          break;
        default:
          out_ += "\\u";
          for (int d = 0; d < 4; ++d) out_ += kHex[s_.NextInt(0, 21)];
          break;
      }
    }
    out_ += '"';
  }

  void Number() {
    if (k_.negative && s_.NextBool()) out_ += '-';
    out_ += std::to_string(s_.NextInt(0, 999));
    if (k_.fractions && s_.NextBool()) {
      out_ += '.';
      out_ += std::to_string(s_.NextInt(0, 99));
    }
    if (k_.exponents && s_.NextBool()) {
      out_ += s_.NextBool() ? 'E' : 'e';
      switch (s_.NextInt(0, 2)) {
        case 1: out_ += '+'; break;
        case 2: out_ += '-'; break;
        default: break;
      }
      out_ += std::to_string(s_.NextInt(0, 30));
    }
  }

  void Space() {
    if (!k_.whitespace) return;
    static constexpr char kWs[] = " \t\n\r";
    for (auto n = s_.NextInt(0, 1); n > 0; --n) out_ += kWs[s_.NextInt(0, 3)];
  }

  const JsonKnobs& k_;
  ParamStream& s_;
  std::string& out_;
};

}  // namespace

void GenerateJson(const GeneratorConfig& c, ParamStream& s, std::string& out) {
  JsonKnobs k{{c.weight("value_object"), c.weight("value_array"), c.weight("value_string"),
               c.weight("value_number"), c.weight("value_true"), c.weight("value_false"),
               c.weight("value_null")},
              c.toggle("top_level_container"),
              c.toggle("emit_escapes"),
              c.toggle("emit_unicode_escapes"),
              c.toggle("emit_fractions"),
              c.toggle("emit_exponents"),
              c.toggle("emit_negative"),
              c.toggle("emit_whitespace"),
              c.bound("max_depth"),
              c.bound("max_len"),
              c.bound("max_string_len")};
  JsonWriter(k, s, out).Document();

  // Optional single-character corruption so rejection paths stay reachable.
  const double syntax[] = {c.weight("syntax_ok"), c.weight("syntax_error")};
  if ((syntax[0] > 0 || syntax[1] > 0) && s.ChooseWeighted(syntax) == 1) {
    static constexpr char kJunk[] = "{}[]\",:\\ex-.0";
    const auto pos = static_cast<std::size_t>(s.NextInt(0, static_cast<std::int64_t>(out.size())));
    const char junk = kJunk[s.NextInt(0, sizeof(kJunk) - 2)];
    switch (s.NextInt(0, 2)) {
      case 0: out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), junk); break;
      case 1: if (pos < out.size()) out.erase(pos, 1); break;
      default: out.resize(pos); break;
    }
  }
}

}  // namespace predfuzz::gen_internal

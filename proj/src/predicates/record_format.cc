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

#include "predicates/record_format.h"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "common/error.h"

namespace predfuzz {
namespace {

using nlohmann::json;

std::string Quote(const std::string& s) { return json(s).dump(); }

struct BranchLine {
  std::string line;
  std::string value;
};

// Renders `{ "line": L, "<key>": V }` rows with both columns padded.
void AppendBranches(std::string& out, const std::string& pad, const char* key,
                    const std::vector<BranchLine>& rows) {
  std::size_t line_w = 0, value_w = 0;
  for (const auto& r : rows) {
    line_w = std::max(line_w, r.line.size());
    value_w = std::max(value_w, r.value.size());
  }
  out += pad + "  \"branches\": [\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += pad + "    { \"line\": " + r.line + "," + std::string(line_w - r.line.size(), ' ') +
           " \"" + key + "\": " + r.value + std::string(value_w - r.value.size(), ' ') + " }";
    out += i + 1 < rows.size() ? ",\n" : "\n";
  }
  out += pad + "  ]\n";
}

template <typename T, typename F>
std::string FormatArray(const std::vector<T>& items, F format_one) {
  if (items.empty()) return "[]\n";
  std::string out = "[\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string rec = format_one(items[i], 2);
    rec.pop_back();  // trailing newline
    out += rec;
    out += i + 1 < items.size() ? ",\n" : "\n";
  }
  return out + "]\n";
}

json ParseJson(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

int PositiveInt(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 1) {
    throw Error(ErrorCode::kParseError, std::string("expected positive integer \"") + key + "\"");
  }
  return j.at(key).get<int>();
}

std::uint64_t Count(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
    throw Error(ErrorCode::kParseError, std::string("expected count \"") + key + "\"");
  }
  return j.at(key).get<std::uint64_t>();
}

std::string Str(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(ErrorCode::kParseError, std::string("expected string \"") + key + "\"");
  }
  return j.at(key).get<std::string>();
}

const json& Branches(const json& j) {
  if (!j.contains("branches") || !j.at("branches").is_array() || j.at("branches").size() < 2) {
    throw Error(ErrorCode::kParseError, "expected \"branches\" with at least two entries");
  }
  return j.at("branches");
}

std::vector<json> Items(const json& doc) {
  if (doc.is_array()) return {doc.begin(), doc.end()};
  if (doc.is_object()) return {doc};
  throw Error(ErrorCode::kParseError, "expected a record object or an array of records");
}

}  // namespace

std::string FormatStaticRecord(const StaticPredicateRecord& r, int indent) {
  const std::string pad(indent, ' ');
  std::string out = pad + "{\n";
  out += pad + "  \"class\": " + Quote(r.source_class) + ",\n";
  out += pad + "  \"method\": " + Quote(r.source_method) + ",\n";
  out += pad + "  \"line\": " + std::to_string(r.line) + ",\n";
  std::vector<BranchLine> rows;
  for (const auto& b : r.branches) {
    rows.push_back({std::to_string(b.line), std::to_string(b.dominance)});
  }
  AppendBranches(out, pad, "dominance", rows);
  return out + pad + "}\n";
}

std::string FormatStaticRecords(const std::vector<StaticPredicateRecord>& records) {
  return FormatArray(records, FormatStaticRecord);
}

std::string FormatDynamicRecord(const DynamicPredicateRecord& r, int indent) {
  const std::string pad(indent, ' ');
  std::string out = pad + "{\n";
  out += pad + "  \"class\": " + Quote(r.meta.source_class) + ",\n";
  out += pad + "  \"method\": " + Quote(r.meta.source_method) + ",\n";
  out += pad + "  \"predicateLine\": " + std::to_string(r.meta.predicate_line) + ",\n";
  out += pad + "  \"predicateInputs\": " + std::to_string(r.predicate_inputs) + ",\n";
  std::vector<BranchLine> rows;
  for (std::size_t i = 0; i < r.meta.branch_lines.size(); ++i) {
    std::uint64_t n = i < r.branch_inputs.size() ? r.branch_inputs[i] : 0;
    rows.push_back({std::to_string(r.meta.branch_lines[i]), std::to_string(n)});
  }
  AppendBranches(out, pad, "inputs", rows);
  return out + pad + "}\n";
}

std::string FormatDynamicReport(const DynamicPredicateReport& report) {
  return FormatArray(report.records, FormatDynamicRecord);
}

std::vector<StaticPredicateRecord> ParseStaticRecords(std::string_view text) {
  std::vector<StaticPredicateRecord> out;
  for (const json& j : Items(ParseJson(text))) {
    if (!j.is_object()) throw Error(ErrorCode::kParseError, "record is not an object");
    StaticPredicateRecord r{Str(j, "class"), Str(j, "method"), PositiveInt(j, "line"), {}, 0};
    std::string pid = r.source_class + "." + r.source_method + ":" + std::to_string(r.line);
    for (const json& b : Branches(j)) {
      BranchOutcome o{pid, "", PositiveInt(b, "line"), Count(b, "dominance")};
      r.score = std::max(r.score, o.dominance);
      r.branches.push_back(std::move(o));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DynamicPredicateRecord> ParseDynamicRecords(std::string_view text) {
  std::vector<DynamicPredicateRecord> out;
  for (const json& j : Items(ParseJson(text))) {
    if (!j.is_object()) throw Error(ErrorCode::kParseError, "record is not an object");
    DynamicPredicateRecord r;
    r.meta.source_class = Str(j, "class");
    r.meta.source_method = Str(j, "method");
    r.meta.predicate_line = PositiveInt(j, "predicateLine");
    r.meta.predicate_id = r.meta.source_class + "." + r.meta.source_method + ":" +
                          std::to_string(r.meta.predicate_line);
    r.predicate_inputs = Count(j, "predicateInputs");
    for (const json& b : Branches(j)) {
      r.meta.branch_lines.push_back(PositiveInt(b, "line"));
      r.branch_inputs.push_back(Count(b, "inputs"));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace predfuzz

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

#include <nlohmann/json.hpp>

#include "common/error.h"
#include "predicates/record_format.h"
#include "refine/refine.h"
#include "targets/embedded.h"
#include "targets/target.h"

namespace predfuzz {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void Invalid(const std::string& what) { throw Error(ErrorCode::kRefinerInvalid, what); }

ordered_json ParseBody(std::string_view text) {
  try {
    return ordered_json::parse(text);
  } catch (const std::exception& e) {
    Invalid(std::string("body is not JSON: ") + e.what());
  }
}

GeneratorConfig ConfigFrom(const ordered_json& j) {
  try {
    return LoadConfig(j.dump());
  } catch (const Error& e) {
    Invalid(e.what());
  }
}

std::vector<StaticPredicateRecord> StaticFrom(const ordered_json& j) {
  try {
    return ParseStaticRecords(j.dump());
  } catch (const Error& e) {
    Invalid(e.what());
  }
}

bool IsPlainText(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char ch) {
    const auto c = static_cast<unsigned char>(ch);
    return c == '\t' || c == '\n' || c == '\r' || (c >= 0x20 && c < 0x7f);
  });
}

ordered_json EncodeSample(const std::string& s) {
  if (IsPlainText(s)) return {{"encoding", "text"}, {"data", s}};
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string hex;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    hex += kDigits[c >> 4];
    hex += kDigits[c & 15];
  }
  return {{"encoding", "hex"}, {"data", hex}};
}

std::string DecodeSample(const ordered_json& j) {
  const auto encoding = j.at("encoding").get<std::string>();
  const auto data = j.at("data").get<std::string>();
  if (encoding == "text") return data;
  if (encoding != "hex" || data.size() % 2 != 0) Invalid("bad sample input encoding");
  std::string out;
  for (std::size_t i = 0; i < data.size(); i += 2) {
    out += static_cast<char>(std::stoi(data.substr(i, 2), nullptr, 16));
  }
  return out;
}

}  // namespace

std::string RefinerRequestToJson(const RefinerRequest& r) {
  ordered_json j;
  j["kind"] = "refine";
  j["target"] = r.target_id;
  j["iteration"] = r.iteration;
  j["feedback_mode"] = FeedbackModeName(r.feedback_mode);
  j["config"] = ordered_json::parse(SaveConfig(r.config));
  j["campaign"] = {{"executions", r.campaign.executions},
                   {"final_coverage", r.campaign.final_coverage},
                   {"total_branches", r.campaign.total_branches},
                   {"saved_inputs", r.campaign.saved_inputs},
                   {"inputs_per_sec", r.campaign.inputs_per_sec}};
  auto samples = ordered_json::array();
  for (const auto& s : r.sample_inputs) samples.push_back(EncodeSample(s));
  j["sample_inputs"] = std::move(samples);
  if (r.dynamic_report) {
    j["dynamic_report"] = {{"total_saved_inputs", r.dynamic_report->total_saved_inputs},
                           {"records", ordered_json::parse(FormatDynamicReport(*r.dynamic_report))}};
  }
  if (r.static_records) j["static_records"] = ordered_json::parse(FormatStaticRecords(*r.static_records));
  return j.dump(2);
}

RefinerRequest RefinerRequestFromJson(std::string_view text) {
  const ordered_json j = ParseBody(text);
  RefinerRequest r;
  try {
    if (j.at("kind") != "refine") Invalid("kind is not refine");
    r.target_id = j.at("target").get<std::string>();
    r.iteration = j.at("iteration").get<int>();
    r.feedback_mode = ParseFeedbackMode(j.at("feedback_mode").get<std::string>());
    r.config = ConfigFrom(j.at("config"));
    const auto& c = j.at("campaign");
    r.campaign = {c.at("executions").get<std::uint64_t>(), c.at("final_coverage").get<std::size_t>(),
                  c.at("total_branches").get<std::size_t>(), c.at("saved_inputs").get<std::size_t>(),
                  c.at("inputs_per_sec").get<double>()};
    for (const auto& s : j.at("sample_inputs")) r.sample_inputs.push_back(DecodeSample(s));
    if (j.contains("dynamic_report")) {
      const auto& d = j.at("dynamic_report");
      DynamicPredicateReport rep;
      rep.total_saved_inputs = d.at("total_saved_inputs").get<std::uint64_t>();
      rep.records = ParseDynamicRecords(d.at("records").dump());
      r.dynamic_report = std::move(rep);
    }
    if (j.contains("static_records")) r.static_records = StaticFrom(j.at("static_records"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kRefinerInvalid) throw;
    Invalid(e.what());
  } catch (const std::exception& e) {
    Invalid(e.what());
  }
  return r;
}

std::string RefinerResponseToJson(const RefinerResponse& r) {
  ordered_json j = ordered_json::object();
  if (r.config) j["config"] = ordered_json::parse(SaveConfig(*r.config));
  if (r.records) j["records"] = ordered_json::parse(FormatStaticRecords(*r.records));
  return j.dump(2);
}

RefinerResponse RefinerResponseFromJson(std::string_view text) {
  const ordered_json j = ParseBody(text);
  if (!j.is_object()) Invalid("response is not an object");
  RefinerResponse r;
  if (j.contains("config")) r.config = ConfigFrom(j.at("config"));
  if (j.contains("records")) r.records = StaticFrom(j.at("records"));
  if (!r.config && !r.records) Invalid("response has neither config nor records");
  return r;
}

std::string IdentifyRequestToJson(std::string_view target_id) {
  const TargetBinding& t = FindTarget(target_id);
  ordered_json j;
  j["kind"] = "identify_predicates";
  j["target"] = t.target_id;
  j["entry_point"] = t.entry_point;
  auto sources = ordered_json::array();
  for (const auto& path : t.source_files) {
    sources.push_back({{"path", path}, {"text", std::string(EmbeddedTargetFile(path))}});
  }
  j["sources"] = std::move(sources);
  return j.dump(2);
}

IdentifyResult ValidateIdentifiedRecords(std::string_view target_id,
                                         std::vector<StaticPredicateRecord> records) {
  const auto known = RankPredicates(TargetCfg(target_id).graph);
  IdentifyResult out;
  for (auto& r : records) {
    const auto it = std::find_if(known.begin(), known.end(), [&](const StaticPredicateRecord& k) {
      return k.source_class == r.source_class && k.source_method == r.source_method && k.line == r.line;
    });
    const std::string where = r.source_class + "." + r.source_method + ":" + std::to_string(r.line);
    if (it == known.end()) {
      out.warnings.push_back("dropped " + where + ": no such predicate");
      continue;
    }
    bool ok = true;
    for (const auto& b : r.branches) {
      const bool found = std::any_of(it->branches.begin(), it->branches.end(),
                                     [&](const BranchOutcome& k) { return k.line == b.line; });
      if (!found) {
        out.warnings.push_back("dropped " + where + ": no branch at line " + std::to_string(b.line));
        ok = false;
        break;
      }
    }
    if (ok) out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace predfuzz

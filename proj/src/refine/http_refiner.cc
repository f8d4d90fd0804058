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

#include <httplib.h>

#include "common/error.h"
#include "refine/refine.h"

namespace predfuzz {
namespace {

struct Endpoint {
  std::string base;  // scheme://host:port
  std::string path;
};

Endpoint SplitEndpoint(std::string_view url) {
  const auto scheme = url.find("://");
  if (scheme == std::string_view::npos || url.substr(0, scheme) != "http") {
    throw Error(ErrorCode::kInvalidArgument, "refiner endpoint must be an http:// URL: " + std::string(url));
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string_view::npos) return {std::string(url), "/"};
  return {std::string(url.substr(0, slash)), std::string(url.substr(slash))};
}

}  // namespace

std::string PostJson(std::string_view endpoint, const std::string& body,
                     std::chrono::milliseconds timeout) {
  const Endpoint ep = SplitEndpoint(endpoint);
  httplib::Client client(ep.base);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const auto res = client.Post(ep.path, body, "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw Error(ErrorCode::kRefinerTimeout, std::string(endpoint) + ": " + httplib::to_string(err));
    }
    throw Error(ErrorCode::kIo, std::string(endpoint) + ": " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::kIo, std::string(endpoint) + ": HTTP " + std::to_string(res->status));
  }
  return res->body;
}

Refiner MakeHttpRefiner(std::string endpoint, std::chrono::milliseconds timeout) {
  return [endpoint = std::move(endpoint), timeout](const RefinerRequest& req) {
    return RefinerResponseFromJson(PostJson(endpoint, RefinerRequestToJson(req), timeout));
  };
}

IdentifyResult LlmIdentifyPredicates(std::string_view endpoint, std::string_view target_id,
                                     std::chrono::milliseconds timeout) {
  const RefinerResponse resp =
      RefinerResponseFromJson(PostJson(endpoint, IdentifyRequestToJson(target_id), timeout));
  if (!resp.records) throw Error(ErrorCode::kRefinerInvalid, "identify response carries no records");
  return ValidateIdentifiedRecords(target_id, *resp.records);
}

}  // namespace predfuzz

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

#include "gen/profiles.h"

#include <vector>

#include "common/embedded_file.h"

namespace predfuzz {

std::span<const ShippedProfile> ShippedProfiles() {
  static const auto* profiles = [] {
    auto* out = new std::vector<ShippedProfile>;
    for (const auto& f : EmbeddedProfileFiles()) {
      const auto slash = f.path.find('/');
      const auto dot = f.path.rfind('.');
      out->push_back({f.path.substr(0, slash), f.path.substr(slash + 1, dot - slash - 1), f.text});
    }
    return out;
  }();
  return *profiles;
}

}  // namespace predfuzz

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

#ifndef PREDFUZZ_GEN_PROFILES_H_
#define PREDFUZZ_GEN_PROFILES_H_

#include <span>
#include <string_view>

namespace predfuzz {

// Profile files under profiles/, compiled in by the build.
struct ShippedProfile {
  std::string_view target_id;
  std::string_view profile;
  std::string_view text;
};

std::span<const ShippedProfile> ShippedProfiles();

}  // namespace predfuzz

#endif  // PREDFUZZ_GEN_PROFILES_H_

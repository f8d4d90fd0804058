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

#ifndef PREDFUZZ_COMMON_EMBEDDED_FILE_H_
#define PREDFUZZ_COMMON_EMBEDDED_FILE_H_

#include <span>
#include <string_view>

namespace predfuzz {

// A text file compiled into the library.
struct EmbeddedFile {
  std::string_view path;
  std::string_view text;
};

// Target descriptions and sources, keyed relative to src/targets.
std::span<const EmbeddedFile> EmbeddedTargetFiles();

// Generator profiles, keyed "<target>/<profile>.json".
std::span<const EmbeddedFile> EmbeddedProfileFiles();

}  // namespace predfuzz

#endif  // PREDFUZZ_COMMON_EMBEDDED_FILE_H_

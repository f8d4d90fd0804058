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

#ifndef PREDFUZZ_TARGETS_EMBEDDED_H_
#define PREDFUZZ_TARGETS_EMBEDDED_H_

#include <string_view>

namespace predfuzz {

// Files compiled into the library from src/targets, keyed by their path
// relative to that directory ("bzh/bzh.cfg"). Empty for unknown paths.
std::string_view EmbeddedTargetFile(std::string_view path);

}  // namespace predfuzz

#endif  // PREDFUZZ_TARGETS_EMBEDDED_H_

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

#include "targets/embedded.h"

#include "common/embedded_file.h"

namespace predfuzz {

std::string_view EmbeddedTargetFile(std::string_view path) {
  for (const auto& f : EmbeddedTargetFiles()) {
    if (f.path == path) return f.text;
  }
  return {};
}

}  // namespace predfuzz

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

#ifndef PREDFUZZ_COMMON_FILE_UTIL_H_
#define PREDFUZZ_COMMON_FILE_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace predfuzz {

// All throw Error(kIo) on failure.
std::string ReadTextFile(const std::filesystem::path& path);
std::vector<std::uint8_t> ReadBinaryFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);
void WriteBinaryFile(const std::filesystem::path& path, std::span<const std::uint8_t> data);
void EnsureDirectory(const std::filesystem::path& path);

}  // namespace predfuzz

#endif  // PREDFUZZ_COMMON_FILE_UTIL_H_

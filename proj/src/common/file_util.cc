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

#include "common/file_util.h"

#include <fstream>
#include <iterator>
#include <system_error>

#include "common/error.h"

namespace predfuzz {
namespace {

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return in;
}

void WriteAll(const std::filesystem::path& path, const char* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(data, static_cast<std::streamsize>(size));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> ReadBinaryFile(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  return {text.begin(), text.end()};
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  WriteAll(path, text.data(), text.size());
}

void WriteBinaryFile(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  WriteAll(path, reinterpret_cast<const char*>(data.data()), data.size());
}

void EnsureDirectory(const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec || !std::filesystem::is_directory(path)) {
    throw Error(ErrorCode::kIo, "cannot create directory " + path.string());
  }
}

}  // namespace predfuzz

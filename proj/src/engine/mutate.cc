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

#include "common/error.h"
#include "engine/engine.h"

namespace predfuzz {

void BitFlip(Bytes& bytes, std::size_t pos, int bit) {
  bytes.at(pos) ^= static_cast<std::uint8_t>(1u << bit);
}

void ByteSubstitute(Bytes& bytes, std::size_t pos, std::uint8_t value) { bytes.at(pos) = value; }

void BlockInsert(Bytes& bytes, std::size_t pos, std::span<const std::uint8_t> block) {
  bytes.insert(bytes.begin() + static_cast<std::ptrdiff_t>(std::min(pos, bytes.size())),
               block.begin(), block.end());
}

void BlockDelete(Bytes& bytes, std::size_t pos, std::size_t len) {
  if (pos >= bytes.size()) return;
  len = std::min(len, bytes.size() - pos);
  bytes.erase(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
              bytes.begin() + static_cast<std::ptrdiff_t>(pos + len));
}

Bytes Mutate(const Bytes& bytes, ParamStream& decisions, std::size_t max_size) {
  if (max_size == 0) throw Error(ErrorCode::kInvalidArgument, "max input size must be positive");
  Bytes out(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(std::min(bytes.size(), max_size)));
  const auto k = decisions.NextInt(1, kMaxStackedMutations);
  for (std::int64_t i = 0; i < k; ++i) {
    auto op = MutationOp::kBlockInsert;
    if (!out.empty()) {
      op = static_cast<MutationOp>(decisions.NextInt(0, 3));
      if (op == MutationOp::kBlockInsert && out.size() >= max_size) op = MutationOp::kByteSubstitute;
      if (op == MutationOp::kBlockDelete && out.size() == 1) op = MutationOp::kByteSubstitute;
    }
    const auto n = static_cast<std::int64_t>(out.size());
    switch (op) {
      case MutationOp::kBitFlip: {
        const auto pos = decisions.NextInt(0, n - 1);
        BitFlip(out, static_cast<std::size_t>(pos), static_cast<int>(decisions.NextInt(0, 7)));
        break;
      }
      case MutationOp::kByteSubstitute: {
        const auto pos = decisions.NextInt(0, n - 1);
        ByteSubstitute(out, static_cast<std::size_t>(pos), decisions.NextByte());
        break;
      }
      case MutationOp::kBlockInsert: {
        const auto room = static_cast<std::int64_t>(std::min(kMaxMutationBlock, max_size - out.size()));
        const auto pos = decisions.NextInt(0, n);
        const auto len = decisions.NextInt(1, room);
        BlockInsert(out, static_cast<std::size_t>(pos), decisions.NextBytes(static_cast<std::size_t>(len)));
        break;
      }
      case MutationOp::kBlockDelete: {
        const auto pos = decisions.NextInt(0, n - 1);
        const auto room = std::min({static_cast<std::int64_t>(kMaxMutationBlock), n - pos, n - 1});
        BlockDelete(out, static_cast<std::size_t>(pos), static_cast<std::size_t>(decisions.NextInt(1, room)));
        break;
      }
    }
  }
  return out;
}

}  // namespace predfuzz

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

#include "stream/param_stream.h"

#include <string>

#include "common/error.h"

namespace predfuzz {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint8_t ParamStream::OverflowByte(std::uint64_t seed, std::uint64_t pos) {
  return static_cast<std::uint8_t>(Mix64(seed ^ Mix64(pos)) >> 56);
}

std::uint8_t ParamStream::NextByte() {
  std::size_t pos = cursor_++;
  if (pos < bytes_.size()) return bytes_[pos];
  return OverflowByte(overflow_seed_, pos);
}

std::int64_t ParamStream::NextInt(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw Error(ErrorCode::kInvalidRange,
                "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == 0) return lo;
  std::uint64_t value = 0;
  for (std::uint64_t covered = span; ; covered >>= 8) {
    value = (value << 8) | NextByte();
    if (covered <= 0xff) break;
  }
  // span + 1 overflows only for the full 64-bit range, where no reduction is needed.
  if (span != UINT64_MAX) value %= span + 1;
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + value);
}

bool ParamStream::NextBool() { return (NextByte() & 1) != 0; }

Bytes ParamStream::NextBytes(std::size_t n) {
  Bytes out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(NextByte());
  return out;
}

std::size_t ParamStream::ChooseWeighted(std::span<const double> weights) {
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw Error(ErrorCode::kInvalidWeights, "negative or NaN weight");
    total += w;
  }
  if (!(total > 0)) throw Error(ErrorCode::kInvalidWeights, "no positive weight");
  if (weights.size() == 1) return 0;

  const unsigned hi = NextByte();
  const unsigned lo = NextByte();
  const double point = static_cast<double>((hi << 8) | lo) / 65536.0 * total;
  double acc = 0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    acc += weights[i];
    last_positive = i;
    if (point < acc) return i;
  }
  return last_positive;
}

Bytes ParamStream::ConsumedPrefix() const {
  Bytes out = bytes_;
  for (std::size_t pos = bytes_.size(); pos < cursor_; ++pos) {
    out.push_back(OverflowByte(overflow_seed_, pos));
  }
  return out;
}

}  // namespace predfuzz

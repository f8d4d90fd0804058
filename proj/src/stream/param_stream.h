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

#ifndef PREDFUZZ_STREAM_PARAM_STREAM_H_
#define PREDFUZZ_STREAM_PARAM_STREAM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace predfuzz {

using Bytes = std::vector<std::uint8_t>;

// Byte-stream-backed source of generation decisions. Every draw is a pure
// function of the bytes consumed so far; once the explicit bytes run out,
// draws continue from a pseudo-random extension keyed by (overflow_seed,
// absolute position), so a stream prefix can be materialised without
// changing what follows.
class ParamStream {
 public:
  explicit ParamStream(std::span<const std::uint8_t> bytes, std::uint64_t overflow_seed = 0)
      : bytes_(bytes.begin(), bytes.end()), overflow_seed_(overflow_seed) {}
  ParamStream(Bytes bytes, std::uint64_t overflow_seed)
      : bytes_(std::move(bytes)), overflow_seed_(overflow_seed) {}

  // Value in [lo, hi]; reads the fewest whole bytes covering the range and
  // reduces modulo the range size. Throws kInvalidRange when lo > hi.
  std::int64_t NextInt(std::int64_t lo, std::int64_t hi);
  bool NextBool();
  std::uint8_t NextByte();
  Bytes NextBytes(std::size_t n);
  // Index i with probability weights[i] / sum(weights). Reads two bytes as
  // a big-endian fraction, so the first byte alone fixes the coarse choice
  // and an all-zero stream selects the first positive weight. Throws
  // kInvalidWeights if no weight is positive (or any is negative).
  std::size_t ChooseWeighted(std::span<const double> weights);

  std::size_t cursor() const { return cursor_; }
  std::size_t size() const { return bytes_.size(); }
  bool exhausted() const { return cursor_ >= bytes_.size(); }
  std::uint64_t overflow_seed() const { return overflow_seed_; }
  const Bytes& bytes() const { return bytes_; }

  // The explicit bytes followed by every overflow byte drawn so far.
  Bytes ConsumedPrefix() const;

  // Overflow byte at absolute stream position `pos`.
  static std::uint8_t OverflowByte(std::uint64_t seed, std::uint64_t pos);

 private:
  Bytes bytes_;
  std::uint64_t overflow_seed_;
  std::size_t cursor_ = 0;
};

// splitmix64 finaliser; also used as the engine's seed mixer.
std::uint64_t Mix64(std::uint64_t x);

}  // namespace predfuzz

#endif  // PREDFUZZ_STREAM_PARAM_STREAM_H_

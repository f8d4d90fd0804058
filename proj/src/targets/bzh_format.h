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

#ifndef PREDFUZZ_TARGETS_BZH_FORMAT_H_
#define PREDFUZZ_TARGETS_BZH_FORMAT_H_

#include <array>
#include <cstdint>
#include <span>

namespace predfuzz::bzh {

// Byte-aligned simplification of a BZip2 stream:
//
//   "BZh" level('1'..'9')
//   block magic 31 41 59 26 53 59       | eos magic 17 72 45 38 50 90 + crc32
//   block crc      u32 big-endian (CRC of the data bytes)
//   randomised     u8  (0 or 1)
//   data length n  u16 big-endian (1 <= n <= level * 100)
//   origPtr        u24 big-endian (< n)
//   nGroups        u8  (2..6)
//   code lengths   nGroups x u8 (1..20)
//   data           n bytes
//   trailer        optional eos magic + crc32, or nothing
inline constexpr std::array<std::uint8_t, 3> kStreamMagic = {'B', 'Z', 'h'};
inline constexpr std::array<std::uint8_t, 6> kBlockMagic = {0x31, 0x41, 0x59, 0x26, 0x53, 0x59};
inline constexpr std::array<std::uint8_t, 6> kEosMagic = {0x17, 0x72, 0x45, 0x38, 0x50, 0x90};
inline constexpr int kMinGroups = 2;
inline constexpr int kMaxGroups = 6;
inline constexpr int kMaxCodeLength = 20;
inline constexpr int kBlockUnit = 100;  // capacity per level digit

inline std::uint32_t Crc32(std::span<const std::uint8_t> data) {
  std::uint32_t crc = 0xffffffffu;
  for (std::uint8_t b : data) {
    crc ^= static_cast<std::uint32_t>(b) << 24;
    for (int i = 0; i < 8; ++i) {
      crc = (crc & 0x80000000u) ? (crc << 1) ^ 0x04c11db7u : crc << 1;
    }
  }
  return ~crc;
}

}  // namespace predfuzz::bzh

#endif  // PREDFUZZ_TARGETS_BZH_FORMAT_H_

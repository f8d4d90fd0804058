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

#include "gen/generator.h"
#include "targets/bzh_format.h"

namespace predfuzz::gen_internal {
namespace {

void PutBe(Bytes& out, std::uint32_t v, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <std::size_t N>
void PutMagic(Bytes& out, const std::array<std::uint8_t, N>& magic, bool structured,
              ParamStream& s) {
  if (structured) {
    out.insert(out.end(), magic.begin(), magic.end());
  } else {
    for (std::size_t i = 0; i < N; ++i) out.push_back(s.NextByte());
  }
}

}  // namespace

void GenerateBzh(const GeneratorConfig& c, ParamStream& s, Bytes& out) {
  const bool header = c.toggle("emit_header");
  const bool magic = c.toggle("emit_block_magic");
  const bool crc = c.toggle("emit_crc");
  const bool randomised = c.toggle("emit_randomised");
  const bool tables = c.toggle("emit_tables");
  const bool bound_ptr = c.toggle("bound_orig_ptr");

  // With no structure enabled the stream is the input.
  if (!header && !magic && !crc && !randomised && !tables && !bound_ptr) {
    out = s.NextBytes(s.size() > s.cursor() ? s.size() - s.cursor() : 0);
    return;
  }

  int level = 9;
  if (header) {
    out.insert(out.end(), bzh::kStreamMagic.begin(), bzh::kStreamMagic.end());
    level = 1 + static_cast<int>(s.NextInt(0, 8));
    out.push_back(static_cast<std::uint8_t>('0' + level));
  } else {
    for (int i = 0; i < 4; ++i) out.push_back(s.NextByte());
    if (out[3] >= '1' && out[3] <= '9') level = out[3] - '0';
  }

  const double block_kind[] = {c.weight("data_block"), c.weight("eos_block")};
  if (s.ChooseWeighted(block_kind) == 1) {
    PutMagic(out, bzh::kEosMagic, magic, s);
    PutBe(out, static_cast<std::uint32_t>(s.NextInt(0, 0xffffffffLL)), 4);
    return;
  }
  PutMagic(out, bzh::kBlockMagic, magic, s);

  const std::int64_t cap = std::min<std::int64_t>(c.bound("max_len"), level * bzh::kBlockUnit);
  const std::int64_t n = s.NextInt(1, std::max<std::int64_t>(1, cap));
  Bytes data;
  data.reserve(static_cast<std::size_t>(n));
  const double run_choice[] = {c.weight("data_fresh"), c.weight("data_repeat")};
  for (std::int64_t i = 0; i < n; ++i) {
    if (!data.empty() && s.ChooseWeighted(run_choice) == 1) {
      data.push_back(data.back());
    } else {
      data.push_back(s.NextByte());
    }
  }

  if (crc) {
    std::uint32_t value = bzh::Crc32(data);
    const double crc_choice[] = {c.weight("crc_valid"), c.weight("crc_corrupt")};
    if (s.ChooseWeighted(crc_choice) == 1) {
      value ^= static_cast<std::uint32_t>(s.NextInt(1, 0xffffffffLL));
    }
    PutBe(out, value, 4);
  } else {
    for (int i = 0; i < 4; ++i) out.push_back(s.NextByte());
  }

  out.push_back(randomised ? static_cast<std::uint8_t>(s.NextInt(0, 1)) : s.NextByte());
  PutBe(out, static_cast<std::uint32_t>(n), 2);
  if (bound_ptr) {
    PutBe(out, static_cast<std::uint32_t>(s.NextInt(0, n - 1)), 3);
  } else {
    PutBe(out, static_cast<std::uint32_t>(s.NextInt(0, 0xffffff)), 3);
  }

  if (tables) {
    const auto groups = s.NextInt(bzh::kMinGroups, bzh::kMaxGroups);
    out.push_back(static_cast<std::uint8_t>(groups));
    for (std::int64_t g = 0; g < groups; ++g) {
      out.push_back(static_cast<std::uint8_t>(s.NextInt(1, bzh::kMaxCodeLength)));
    }
  } else {
    const std::uint8_t groups = s.NextByte();
    out.push_back(groups);
    for (int g = 0; g < groups % 8; ++g) out.push_back(s.NextByte());
  }

  out.insert(out.end(), data.begin(), data.end());

  const double trailer[] = {c.weight("trailer_eos"), c.weight("trailer_none"),
                            c.weight("trailer_garbage")};
  switch (s.ChooseWeighted(trailer)) {
    case 0:
      out.insert(out.end(), bzh::kEosMagic.begin(), bzh::kEosMagic.end());
      PutBe(out, bzh::Crc32(data), 4);
      break;
    case 1:
      break;
    default:
      for (auto k = s.NextInt(1, 8); k > 0; --k) out.push_back(s.NextByte());
      break;
  }
}

}  // namespace predfuzz::gen_internal

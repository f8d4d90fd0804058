#include <algorithm>
#include <array>
#include <cstdint>
#include <span>

#include "targets/bzh_format.h"
#include "targets/embedded.h"
#include "targets/target.h"

namespace predfuzz::targets_internal {
namespace {

constexpr char kClass[] = "bzh.BZip2CompressorInputStream";

enum BzhSite {
  kMagicB,
  kMagicZ,
  kMagicH,
  kLevel,
  kBlockStart,
  kBlock2,
  kBlock3,
  kBlock4,
  kBlock5,
  kBlock6,
  kEosRest,
  kCrcRead,
  kRandomised,
  kLength,
  kOrigPtr,
  kGroups,
  kCodeLength,
  kDataPresent,
  kDerandomize,
  kRun,
  kRun4,
  kByteClass,
  kSelector,
  kOrigPtrZero,
  kCrcMatch,
  kTrailer,
  kStreamCrc,
  kNumSites,
};

const BranchTable& Table() {
  static const BranchTable* table = [] {
    std::vector<PredicateMeta> m = {
        Site(kClass, "init", 101, {102, 103}),
        Site(kClass, "init", 104, {105, 106}),
        Site(kClass, "init", 107, {108, 109}),
        Site(kClass, "init", 110, {111, 112}),
        Site(kClass, "initBlock", 120, {121, 122, 123}),
        Site(kClass, "initBlock", 124, {125, 126}),
        Site(kClass, "initBlock", 127, {128, 129}),
        Site(kClass, "initBlock", 130, {131, 132}),
        Site(kClass, "initBlock", 133, {134, 135}),
        Site(kClass, "initBlock", 136, {137, 138}),
        Site(kClass, "initBlock", 139, {140, 141}),
        Site(kClass, "initBlock", 143, {144, 145}),
        Site(kClass, "initBlock", 146, {147, 148, 149}),
        Site(kClass, "initBlock", 150, {151, 152}),
        Site(kClass, "initBlock", 153, {154, 155}),
        Site(kClass, "recvDecodingTables", 160, {161, 162}),
        Site(kClass, "recvDecodingTables", 164, {165, 166}),
        Site(kClass, "recvDecodingTables", 168, {169, 170}),
        Site(kClass, "setupBlock", 180, {181, 182}),
        Site(kClass, "setupBlock", 184, {185, 186}),
        Site(kClass, "setupBlock", 187, {188, 189}),
        Site(kClass, "setupBlock", 191, {192, 193, 194}),
        Site(kClass, "setupBlock", 196, {197, 198}),
        Site(kClass, "setupBlock", 200, {201, 202}),
        Site(kClass, "endBlock", 210, {211, 212}),
        Site(kClass, "endBlock", 214, {215, 216, 217}),
        Site(kClass, "endBlock", 219, {220, 221}),
    };
    return new BranchTable(std::move(m));
  }();
  return *table;
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t remaining() const { return in_.size() - pos_; }
  // -1 past the end.
  int Peek(std::size_t ahead = 0) const {
    return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : -1;
  }
  std::uint32_t ReadBe(int width) {
    std::uint32_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }
  void Skip(std::size_t n) { pos_ += n; }
  std::span<const std::uint8_t> Take(std::size_t n) {
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

RunOutcome Reject(const char* reason) { return {RunStatus::kRejected, reason, {}}; }

RunOutcome Decode(std::span<const std::uint8_t> input, ExecutionTrace& trace) {
  Probe p(trace);
  Reader r(input);

  // init: stream header.
  if (!p.Cond(kMagicB, r.Peek(0) == 'B')) return Reject("header");
  if (!p.Cond(kMagicZ, r.Peek(1) == 'Z')) return Reject("header");
  if (!p.Cond(kMagicH, r.Peek(2) == 'h')) return Reject("header");
  if (!p.Cond(kLevel, r.Peek(3) >= '1' && r.Peek(3) <= '9')) return Reject("level");
  const int level = r.Peek(3) - '0';
  r.Skip(4);

  // initBlock: block or end-of-stream magic, then the block header fields.
  const int first = r.Peek();
  const std::size_t kind = first == bzh::kBlockMagic[0] ? 0 : first == bzh::kEosMagic[0] ? 1 : 2;
  p.Take(kBlockStart, kind);
  if (kind == 2) return Reject("block_magic");
  if (kind == 1) {
    bool ok = r.remaining() >= bzh::kEosMagic.size() + 4;
    for (std::size_t i = 1; ok && i < bzh::kEosMagic.size(); ++i) {
      ok = r.Peek(i) == bzh::kEosMagic[i];
    }
    if (!p.Cond(kEosRest, ok)) return Reject("block_magic");
    return {RunStatus::kOk, "empty", {}};
  }
  for (int i = 1; i < 6; ++i) {
    if (!p.Cond(kBlockStart + i, r.Peek(static_cast<std::size_t>(i)) == bzh::kBlockMagic[i])) {
      return Reject("block_magic");
    }
  }
  r.Skip(bzh::kBlockMagic.size());

  if (!p.Cond(kCrcRead, r.remaining() >= 4)) return Reject("crc");
  const std::uint32_t stored_crc = r.ReadBe(4);

  const int flag = r.Peek();
  const std::size_t rand_kind = flag == 0 ? 0 : flag == 1 ? 1 : 2;
  p.Take(kRandomised, rand_kind);
  if (rand_kind == 2) return Reject("randomised");
  r.Skip(1);
  const bool randomised = rand_kind == 1;

  std::uint32_t n = 0;
  if (r.remaining() >= 2) n = r.ReadBe(2);
  if (!p.Cond(kLength, n >= 1 && n <= static_cast<std::uint32_t>(level * bzh::kBlockUnit))) {
    return Reject("length");
  }
  const bool have_ptr = r.remaining() >= 3;
  const std::uint32_t orig_ptr = have_ptr ? r.ReadBe(3) : 0;
  if (!p.Cond(kOrigPtr, have_ptr && orig_ptr < n)) return Reject("orig_ptr");

  // recvDecodingTables: selector group count and code lengths.
  const int groups = r.Peek();
  if (!p.Cond(kGroups, groups >= bzh::kMinGroups && groups <= bzh::kMaxGroups)) {
    return Reject("tables");
  }
  r.Skip(1);
  for (int g = 0; g < groups; ++g) {
    const int len = r.Peek();
    if (!p.Cond(kCodeLength, len >= 1 && len <= bzh::kMaxCodeLength)) return Reject("tables");
    r.Skip(1);
  }
  if (!p.Cond(kDataPresent, r.remaining() >= n)) return Reject("truncated");
  const auto data = r.Take(n);

  // setupBlock: the post-validation region.
  std::array<std::uint8_t, 9 * bzh::kBlockUnit> block{};
  std::copy(data.begin(), data.end(), block.begin());
  if (p.Cond(kDerandomize, randomised)) {
    std::uint32_t state = 0x2545f491u;
    for (std::uint32_t i = 0; i < n; ++i) {
      state = state * 1103515245u + 12345u;
      if (((state >> 16) & 0x3f) == 0) block[i] ^= 1;
    }
  }
  int prev = -1;
  int run = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const int b = block[i];
    if (p.Cond(kRun, b == prev)) {
      if (p.Cond(kRun4, ++run == 3)) run = 0;
    } else {
      run = 0;
    }
    p.Take(kByteClass, b == 0 ? 0 : b < 0x80 ? 1 : 2);
    p.Cond(kSelector, b < groups);
    prev = b;
  }
  p.Cond(kOrigPtrZero, orig_ptr == 0);

  // endBlock: checksum and stream trailer.
  const std::uint32_t crc = bzh::Crc32(data);
  if (!p.Cond(kCrcMatch, crc == stored_crc)) return Reject("crc_mismatch");
  bool eos = r.remaining() >= bzh::kEosMagic.size() + 4;
  for (std::size_t i = 0; eos && i < bzh::kEosMagic.size(); ++i) eos = r.Peek(i) == bzh::kEosMagic[i];
  const std::size_t trailer = eos ? 0 : r.remaining() == 0 ? 1 : 2;
  p.Take(kTrailer, trailer);
  if (trailer == 2) return Reject("trailing_garbage");
  if (trailer == 0) {
    r.Skip(bzh::kEosMagic.size());
    if (!p.Cond(kStreamCrc, r.ReadBe(4) == crc && r.remaining() == 0)) {
      return Reject("stream_crc");
    }
  }
  return {RunStatus::kOk, "", {}};
}

}  // namespace

const TargetBinding& BzhTarget() {
  static const TargetBinding* binding = [] {
    static_assert(kNumSites == 27);
    auto* t = new TargetBinding;
    t->target_id = "bzh";
    t->run = Decode;
    t->branches = &Table();
    t->cfg_description = EmbeddedTargetFile("bzh/bzh.cfg");
    t->source_files = {"bzh/bzh.cc"};
    t->entry_point = "read";
    const std::string id = std::string(kClass) + ".";
    t->refine_hints = {
        {id + "init:101", 102, {"emit_header"}, "", 1},
        {id + "initBlock:120", 121, {"emit_block_magic"}, "", 1},
        {id + "initBlock:120", 122, {"emit_block_magic"}, "eos_block", 4},
        {id + "initBlock:143", 144, {"emit_crc"}, "", 1},
        {id + "initBlock:146", 147, {"emit_randomised"}, "", 1},
        {id + "initBlock:153", 154, {"bound_orig_ptr"}, "", 1},
        {id + "recvDecodingTables:160", 161, {"emit_tables"}, "", 1},
        {id + "setupBlock:187", 188, {}, "data_repeat", 4},
        {id + "endBlock:210", 211, {"emit_crc"}, "crc_valid", 4},
        {id + "endBlock:214", 215, {}, "trailer_eos", 4},
    };
    return t;
  }();
  return *binding;
}

}  // namespace predfuzz::targets_internal

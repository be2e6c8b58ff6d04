/* Copyright 2026 The lowlight Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "lowlight/gan/weights.hpp"

#include <bit>
#include <cstring>

#include "lowlight/error.hpp"

namespace lowlight::gan {
namespace {

constexpr char kMagic[4] = {'L', 'L', 'W', 'S'};
constexpr char kEndMarker[4] = {'S', 'W', 'L', 'L'};
// Upper bound on rank and name length; anything larger is a corrupt header.
constexpr std::uint32_t kMaxRank = 8;
constexpr std::uint32_t kMaxNameLen = 4096;

class Writer {
 public:
  void bytes(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) {
      fail(ErrorKind::kFormat, "weight file truncated at byte " + std::to_string(pos_));
    }
  }
  bool match(const char (&tag)[4]) {
    need(4);
    const bool ok = std::memcmp(in_.data() + pos_, tag, 4) == 0;
    pos_ += 4;
    return ok;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{in_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
    pos_ += 8;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string str(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> save_weights(const WeightStore& store) {
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(WeightStore::kFormatVersion);
  w.u64(store.fingerprint);
  w.u32(static_cast<std::uint32_t>(store.entries.size()));
  for (const auto& [name, t] : store.entries) {
    if (t.values.size() != shape_numel(t.shape)) {
      fail(ErrorKind::kFormat, "entry " + name + " has inconsistent shape");
    }
    w.u32(static_cast<std::uint32_t>(name.size()));
    w.bytes(name.data(), name.size());
    w.u32(static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t e : t.shape) w.u32(static_cast<std::uint32_t>(e));
    for (float v : t.values) w.f32(v);
  }
  w.bytes(kEndMarker, 4);
  return w.take();
}

WeightStore load_weights(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (!r.match(kMagic)) fail(ErrorKind::kFormat, "not a weight file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != WeightStore::kFormatVersion) {
    fail(ErrorKind::kFormat, "unsupported weight format version " +
                                 std::to_string(version));
  }
  WeightStore store;
  store.fingerprint = r.u64();
  const std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = r.u32();
    if (name_len == 0 || name_len > kMaxNameLen) {
      fail(ErrorKind::kFormat, "bad entry name length");
    }
    std::string name = r.str(name_len);
    const std::uint32_t rank = r.u32();
    if (rank == 0 || rank > kMaxRank) fail(ErrorKind::kFormat, "bad rank in " + name);
    StoredTensor t;
    std::size_t numel = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      const std::uint32_t e = r.u32();
      if (e == 0) fail(ErrorKind::kFormat, "zero extent in " + name);
      t.shape.push_back(e);
      if (numel > r.remaining() / e) fail(ErrorKind::kFormat, "weight file truncated");
      numel *= e;
    }
    r.need(numel * 4);
    t.values.resize(numel);
    for (float& v : t.values) v = r.f32();
    if (!store.entries.emplace(std::move(name), std::move(t)).second) {
      fail(ErrorKind::kFormat, "duplicate entry in weight file");
    }
  }
  if (!r.match(kEndMarker)) fail(ErrorKind::kFormat, "missing end marker");
  if (r.remaining() != 0) fail(ErrorKind::kFormat, "trailing bytes after end marker");
  return store;
}

}  // namespace lowlight::gan

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
#ifndef LOWLIGHT_GAN_WEIGHTS_HPP_
#define LOWLIGHT_GAN_WEIGHTS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lowlight/tensor.hpp"

namespace lowlight::gan {

struct StoredTensor {
  Shape shape;
  std::vector<float> values;

  friend bool operator==(const StoredTensor&, const StoredTensor&) = default;
};

// Serialized parameters of one network, keyed by layer path.
struct WeightStore {
  static constexpr std::uint32_t kFormatVersion = 1;

  std::uint64_t fingerprint = 0;
  std::map<std::string, StoredTensor> entries;

  friend bool operator==(const WeightStore&, const WeightStore&) = default;
};

// Byte layout, all integers little-endian:
//   "LLWS"            4-byte magic
//   u32 version       kFormatVersion
//   u64 fingerprint   NetworkSpec::fingerprint() of the producing spec
//   u32 entry_count
//   entry_count x {
//     u32 name_len, name bytes (no terminator)
//     u32 rank, rank x u32 extent
//     prod(extents) x f32 (IEEE-754 binary32, little-endian)
//   }
//   "SWLL"            4-byte end marker
// Nothing may follow the end marker.
std::vector<std::uint8_t> save_weights(const WeightStore& store);

// Error(kFormat) on bad magic, version mismatch, truncation or trailing bytes.
WeightStore load_weights(std::span<const std::uint8_t> bytes);

}  // namespace lowlight::gan

#endif  // LOWLIGHT_GAN_WEIGHTS_HPP_

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
#ifndef LOWLIGHT_KERNELS_HPP_
#define LOWLIGHT_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace lowlight::kernels {

// Instruction-set variants. Every variant computes each output element with
// the same sequence of IEEE operations as the scalar reference, so results
// are bit-identical regardless of which one is active.
enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;

  // y[i] += a * x[i] for i in [0, n). Multiply then add, never fused.
  void (*axpy)(std::size_t n, double a, const double* x, double* y);

  // Interleaved 8-bit RGB -> interleaved Y/Cb/Cr (BT.601 full range), and the
  // inverse. Rounding is half away from zero, results clamped to [0, 255].
  void (*rgb_to_ycc)(const std::uint8_t* src, std::uint8_t* dst,
                     std::size_t pixels);
  void (*ycc_to_rgb)(const std::uint8_t* src, std::uint8_t* dst,
                     std::size_t pixels);
};

// True when the variant was compiled in and the running CPU supports it.
bool supported(Isa isa);
std::vector<Isa> supported_isas();

// Table for a specific variant; throws Error(kInvalidInput) if unsupported.
const KernelTable& table(Isa isa);

// The active table. Defaults to the best supported variant at first use.
const KernelTable& active();
void set_active(Isa isa);

// Scoped override, mostly for tests and benchmarks.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

namespace detail {
extern const KernelTable kScalarTable;
#if defined(LOWLIGHT_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(LOWLIGHT_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace lowlight::kernels

#endif  // LOWLIGHT_KERNELS_HPP_

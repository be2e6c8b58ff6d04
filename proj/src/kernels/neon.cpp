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
#include <arm_neon.h>

#include "color_coeffs.hpp"
#include "lowlight/kernels.hpp"

namespace lowlight::kernels {
namespace {

void axpy_neon(std::size_t n, double a, const double* x, double* y) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // vmulq + vaddq rather than vfmaq: the scalar reference rounds twice.
    const float64x2_t p = vmulq_f64(va, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), p));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

// vrndaq rounds half away from zero, same as std::round.
inline std::uint8_t lane_u8(float64x2_t v, int lane) {
  const float64x2_t r = vminq_f64(vmaxq_f64(vrndaq_f64(v), vdupq_n_f64(0.0)),
                                  vdupq_n_f64(255.0));
  return static_cast<std::uint8_t>(lane == 0 ? vgetq_lane_f64(r, 0)
                                             : vgetq_lane_f64(r, 1));
}

inline float64x2_t load_pair(const std::uint8_t* s, int offset) {
  const double v[2] = {static_cast<double>(s[offset]),
                       static_cast<double>(s[3 + offset])};
  return vld1q_f64(v);
}

inline float64x2_t linear3(float64x2_t a, float64x2_t b, float64x2_t c,
                           double ka, double kb, double kc) {
  const float64x2_t ab = vaddq_f64(vmulq_f64(vdupq_n_f64(ka), a),
                                   vmulq_f64(vdupq_n_f64(kb), b));
  return vaddq_f64(ab, vmulq_f64(vdupq_n_f64(kc), c));
}

inline void store_pair(float64x2_t v, std::uint8_t* d, int offset) {
  d[offset] = lane_u8(v, 0);
  d[3 + offset] = lane_u8(v, 1);
}

void rgb_to_ycc_neon(const std::uint8_t* src, std::uint8_t* dst,
                     std::size_t pixels) {
  using namespace color;
  const float64x2_t offset = vdupq_n_f64(kOffset);
  std::size_t p = 0;
  for (; p + 2 <= pixels; p += 2) {
    const std::uint8_t* s = src + 3 * p;
    const float64x2_t r = load_pair(s, 0);
    const float64x2_t g = load_pair(s, 1);
    const float64x2_t b = load_pair(s, 2);
    std::uint8_t* d = dst + 3 * p;
    store_pair(linear3(r, g, b, kYr, kYg, kYb), d, 0);
    store_pair(vaddq_f64(linear3(r, g, b, kCbR, kCbG, kCbB), offset), d, 1);
    store_pair(vaddq_f64(linear3(r, g, b, kCrR, kCrG, kCrB), offset), d, 2);
  }
  if (p < pixels) {
    detail::kScalarTable.rgb_to_ycc(src + 3 * p, dst + 3 * p, pixels - p);
  }
}

void ycc_to_rgb_neon(const std::uint8_t* src, std::uint8_t* dst,
                     std::size_t pixels) {
  using namespace color;
  const float64x2_t offset = vdupq_n_f64(kOffset);
  std::size_t p = 0;
  for (; p + 2 <= pixels; p += 2) {
    const std::uint8_t* s = src + 3 * p;
    const float64x2_t y = load_pair(s, 0);
    const float64x2_t cb = vsubq_f64(load_pair(s, 1), offset);
    const float64x2_t cr = vsubq_f64(load_pair(s, 2), offset);
    std::uint8_t* d = dst + 3 * p;
    store_pair(vaddq_f64(y, vmulq_f64(vdupq_n_f64(kRCr), cr)), d, 0);
    store_pair(vaddq_f64(vaddq_f64(y, vmulq_f64(vdupq_n_f64(kGCb), cb)),
                         vmulq_f64(vdupq_n_f64(kGCr), cr)),
               d, 1);
    store_pair(vaddq_f64(y, vmulq_f64(vdupq_n_f64(kBCb), cb)), d, 2);
  }
  if (p < pixels) {
    detail::kScalarTable.ycc_to_rgb(src + 3 * p, dst + 3 * p, pixels - p);
  }
}

}  // namespace

namespace detail {
const KernelTable kNeonTable{Isa::kNeon, &axpy_neon, &rgb_to_ycc_neon,
                             &ycc_to_rgb_neon};
}  // namespace detail

}  // namespace lowlight::kernels

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
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "color_coeffs.hpp"
#include "lowlight/kernels.hpp"

namespace lowlight::kernels {
namespace {

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d p0 = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d p1 = _mm256_mul_pd(va, _mm256_loadu_pd(x + i + 4));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p0));
    _mm256_storeu_pd(y + i + 4, _mm256_add_pd(_mm256_loadu_pd(y + i + 4), p1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

// Round half away from zero, then clamp to [0, 255]. v - trunc(v) is exact,
// so this matches std::round bit for bit.
inline __m256d round_clamp(__m256d v) {
  const __m256d t = _mm256_round_pd(v, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  const __m256d frac = _mm256_sub_pd(v, t);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d up =
      _mm256_and_pd(_mm256_cmp_pd(frac, _mm256_set1_pd(0.5), _CMP_GE_OQ), one);
  const __m256d down = _mm256_and_pd(
      _mm256_cmp_pd(frac, _mm256_set1_pd(-0.5), _CMP_LE_OQ), one);
  const __m256d r = _mm256_sub_pd(_mm256_add_pd(t, up), down);
  return _mm256_min_pd(_mm256_max_pd(r, _mm256_setzero_pd()),
                       _mm256_set1_pd(255.0));
}

inline __m256d load_lane(const std::uint8_t* src, int offset) {
  return _mm256_set_pd(src[9 + offset], src[6 + offset], src[3 + offset],
                       src[offset]);
}

inline void store_lane(__m256d v, std::uint8_t* dst, int offset) {
  alignas(16) std::int32_t tmp[4];
  _mm_store_si128(reinterpret_cast<__m128i*>(tmp), _mm256_cvtpd_epi32(v));
  for (int k = 0; k < 4; ++k) {
    dst[3 * k + offset] = static_cast<std::uint8_t>(tmp[k]);
  }
}

inline __m256d linear3(__m256d a, __m256d b, __m256d c, double ka, double kb,
                       double kc) {
  const __m256d ab = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(ka), a),
                                   _mm256_mul_pd(_mm256_set1_pd(kb), b));
  return _mm256_add_pd(ab, _mm256_mul_pd(_mm256_set1_pd(kc), c));
}

void rgb_to_ycc_avx2(const std::uint8_t* src, std::uint8_t* dst,
                     std::size_t pixels) {
  using namespace color;
  const __m256d offset = _mm256_set1_pd(kOffset);
  std::size_t p = 0;
  for (; p + 4 <= pixels; p += 4) {
    const std::uint8_t* s = src + 3 * p;
    const __m256d r = load_lane(s, 0);
    const __m256d g = load_lane(s, 1);
    const __m256d b = load_lane(s, 2);
    const __m256d y = linear3(r, g, b, kYr, kYg, kYb);
    const __m256d cb = _mm256_add_pd(linear3(r, g, b, kCbR, kCbG, kCbB), offset);
    const __m256d cr = _mm256_add_pd(linear3(r, g, b, kCrR, kCrG, kCrB), offset);
    std::uint8_t* d = dst + 3 * p;
    store_lane(round_clamp(y), d, 0);
    store_lane(round_clamp(cb), d, 1);
    store_lane(round_clamp(cr), d, 2);
  }
  if (p < pixels) {
    detail::kScalarTable.rgb_to_ycc(src + 3 * p, dst + 3 * p, pixels - p);
  }
}

void ycc_to_rgb_avx2(const std::uint8_t* src, std::uint8_t* dst,
                     std::size_t pixels) {
  using namespace color;
  const __m256d offset = _mm256_set1_pd(kOffset);
  std::size_t p = 0;
  for (; p + 4 <= pixels; p += 4) {
    const std::uint8_t* s = src + 3 * p;
    const __m256d y = load_lane(s, 0);
    const __m256d cb = _mm256_sub_pd(load_lane(s, 1), offset);
    const __m256d cr = _mm256_sub_pd(load_lane(s, 2), offset);
    const __m256d r =
        _mm256_add_pd(y, _mm256_mul_pd(_mm256_set1_pd(kRCr), cr));
    const __m256d g = _mm256_add_pd(
        _mm256_add_pd(y, _mm256_mul_pd(_mm256_set1_pd(kGCb), cb)),
        _mm256_mul_pd(_mm256_set1_pd(kGCr), cr));
    const __m256d b =
        _mm256_add_pd(y, _mm256_mul_pd(_mm256_set1_pd(kBCb), cb));
    std::uint8_t* d = dst + 3 * p;
    store_lane(round_clamp(r), d, 0);
    store_lane(round_clamp(g), d, 1);
    store_lane(round_clamp(b), d, 2);
  }
  if (p < pixels) {
    detail::kScalarTable.ycc_to_rgb(src + 3 * p, dst + 3 * p, pixels - p);
  }
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::kAvx2, &axpy_avx2, &rgb_to_ycc_avx2,
                             &ycc_to_rgb_avx2};
}  // namespace detail

}  // namespace lowlight::kernels

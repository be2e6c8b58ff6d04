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
#include <algorithm>
#include <cmath>

#include "color_coeffs.hpp"
#include "lowlight/kernels.hpp"

namespace lowlight::kernels {
namespace {

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

std::uint8_t to_u8(double v) {
  const double r = std::clamp(std::round(v), 0.0, 255.0);
  return static_cast<std::uint8_t>(r);
}

void rgb_to_ycc_scalar(const std::uint8_t* src, std::uint8_t* dst,
                       std::size_t pixels) {
  using namespace color;
  for (std::size_t p = 0; p < pixels; ++p) {
    const double r = src[3 * p];
    const double g = src[3 * p + 1];
    const double b = src[3 * p + 2];
    const double y = (kYr * r + kYg * g) + kYb * b;
    const double cb = ((kCbR * r + kCbG * g) + kCbB * b) + kOffset;
    const double cr = ((kCrR * r + kCrG * g) + kCrB * b) + kOffset;
    dst[3 * p] = to_u8(y);
    dst[3 * p + 1] = to_u8(cb);
    dst[3 * p + 2] = to_u8(cr);
  }
}

void ycc_to_rgb_scalar(const std::uint8_t* src, std::uint8_t* dst,
                       std::size_t pixels) {
  using namespace color;
  for (std::size_t p = 0; p < pixels; ++p) {
    const double y = src[3 * p];
    const double cb = src[3 * p + 1] - kOffset;
    const double cr = src[3 * p + 2] - kOffset;
    dst[3 * p] = to_u8(y + kRCr * cr);
    dst[3 * p + 1] = to_u8((y + kGCb * cb) + kGCr * cr);
    dst[3 * p + 2] = to_u8(y + kBCb * cb);
  }
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::kScalar, &axpy_scalar, &rgb_to_ycc_scalar,
                               &ycc_to_rgb_scalar};
}  // namespace detail

}  // namespace lowlight::kernels

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
#ifndef LOWLIGHT_SRC_KERNELS_COLOR_COEFFS_HPP_
#define LOWLIGHT_SRC_KERNELS_COLOR_COEFFS_HPP_

// BT.601 full-range (JPEG) coefficients shared by every kernel variant.
// Each variant evaluates the forms in exactly this order:
//   y  = (kYr*r + kYg*g) + kYb*b
//   cb = ((kCbR*r + kCbG*g) + kCbB*b) + 128
//   cr = ((kCrR*r + kCrG*g) + kCrB*b) + 128
//   r' = y + kRCr*(cr-128)
//   g' = (y + kGCb*(cb-128)) + kGCr*(cr-128)
//   b' = y + kBCb*(cb-128)
namespace lowlight::kernels::color {

inline constexpr double kYr = 0.299;
inline constexpr double kYg = 0.587;
inline constexpr double kYb = 0.114;
inline constexpr double kCbR = -0.168736;
inline constexpr double kCbG = -0.331264;
inline constexpr double kCbB = 0.5;
inline constexpr double kCrR = 0.5;
inline constexpr double kCrG = -0.418688;
inline constexpr double kCrB = -0.081312;
inline constexpr double kRCr = 1.402;
inline constexpr double kGCb = -0.344136;
inline constexpr double kGCr = -0.714136;
inline constexpr double kBCb = 1.772;
inline constexpr double kOffset = 128.0;

}  // namespace lowlight::kernels::color

#endif  // LOWLIGHT_SRC_KERNELS_COLOR_COEFFS_HPP_

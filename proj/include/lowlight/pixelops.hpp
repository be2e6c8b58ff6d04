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
#ifndef LOWLIGHT_PIXELOPS_HPP_
#define LOWLIGHT_PIXELOPS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lowlight {

// 8-bit raster, row-major, channels interleaved. Immutable once built.
class RasterImage {
 public:
  RasterImage(std::size_t width, std::size_t height, std::size_t channels,
              std::vector<std::uint8_t> data);
  // Zero-filled image.
  RasterImage(std::size_t width, std::size_t height, std::size_t channels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t channels() const { return channels_; }
  std::size_t pixel_count() const { return width_ * height_; }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> mutable_data() { return data_; }

  std::uint8_t at(std::size_t x, std::size_t y, std::size_t c = 0) const {
    return data_[(y * width_ + x) * channels_ + c];
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::size_t channels_;
  std::vector<std::uint8_t> data_;
};

struct Histogram {
  std::array<std::uint64_t, 256> bins{};
  std::uint64_t total = 0;

  std::array<std::uint64_t, 256> cdf() const;
};

RasterImage rgb_to_yuv(const RasterImage& img);
RasterImage yuv_to_rgb(const RasterImage& img);

// Channel `c` of a multi-channel image as a 1-channel image.
RasterImage extract_channel(const RasterImage& img, std::size_t c);
// Copy of `img` with channel `c` replaced by the 1-channel `plane`.
RasterImage replace_channel(const RasterImage& img, std::size_t c,
                            const RasterImage& plane);

Histogram luma_histogram(const RasterImage& channel);

// Lookup table v -> round((cdf(v) - cdf_min) / (N - cdf_min) * 255). The
// identity table when every sample has the same value.
std::array<std::uint8_t, 256> equalization_lut(const Histogram& hist);

RasterImage equalize_channel(const RasterImage& channel);

// HE on the Y plane of the YCbCr image; chroma untouched.
RasterImage enhance_he(const RasterImage& img);

struct HistogramRow {
  std::uint32_t bin;
  std::uint64_t count;
};

// 256 rows ordered by bin. 3-channel images are reported on their Y plane.
std::vector<HistogramRow> histogram_report(const RasterImage& img);

// CSV with header `bin,count`, one line per row, '\n' line endings.
std::string histogram_csv(const std::vector<HistogramRow>& rows);

}  // namespace lowlight

#endif  // LOWLIGHT_PIXELOPS_HPP_

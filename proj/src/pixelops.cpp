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
#include "lowlight/pixelops.hpp"

#include <algorithm>
#include <sstream>

#include "lowlight/error.hpp"
#include "lowlight/kernels.hpp"

namespace lowlight {
namespace {

void require_channels(const RasterImage& img, std::size_t channels,
                      const char* op) {
  if (img.channels() != channels) {
    fail(ErrorKind::kInvalidInput,
         std::string(op) + ": expected " + std::to_string(channels) +
             "-channel image, got " + std::to_string(img.channels()));
  }
}

}  // namespace

RasterImage::RasterImage(std::size_t width, std::size_t height,
                         std::size_t channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels),
      data_(std::move(data)) {
  if (width == 0 || height == 0) {
    fail(ErrorKind::kInvalidInput, "image extents must be >= 1");
  }
  if (channels != 1 && channels != 3) {
    fail(ErrorKind::kInvalidInput, "image must have 1 or 3 channels");
  }
  if (data_.size() != width * height * channels) {
    fail(ErrorKind::kInvalidInput,
         "image data length " + std::to_string(data_.size()) +
             " does not match " + std::to_string(width) + "x" +
             std::to_string(height) + "x" + std::to_string(channels));
  }
}

RasterImage::RasterImage(std::size_t width, std::size_t height,
                         std::size_t channels)
    : RasterImage(width, height, channels,
                  std::vector<std::uint8_t>(width * height * channels, 0)) {}

std::array<std::uint64_t, 256> Histogram::cdf() const {
  std::array<std::uint64_t, 256> out{};
  std::uint64_t running = 0;
  for (std::size_t v = 0; v < 256; ++v) {
    running += bins[v];
    out[v] = running;
  }
  return out;
}

RasterImage rgb_to_yuv(const RasterImage& img) {
  require_channels(img, 3, "rgb_to_yuv");
  RasterImage out(img.width(), img.height(), 3);
  kernels::active().rgb_to_ycc(img.data().data(), out.mutable_data().data(),
                               img.pixel_count());
  return out;
}

RasterImage yuv_to_rgb(const RasterImage& img) {
  require_channels(img, 3, "yuv_to_rgb");
  RasterImage out(img.width(), img.height(), 3);
  kernels::active().ycc_to_rgb(img.data().data(), out.mutable_data().data(),
                               img.pixel_count());
  return out;
}

RasterImage extract_channel(const RasterImage& img, std::size_t c) {
  if (c >= img.channels()) {
    fail(ErrorKind::kInvalidInput, "channel index out of range");
  }
  std::vector<std::uint8_t> plane(img.pixel_count());
  const auto src = img.data();
  for (std::size_t p = 0; p < plane.size(); ++p) {
    plane[p] = src[p * img.channels() + c];
  }
  return RasterImage(img.width(), img.height(), 1, std::move(plane));
}

RasterImage replace_channel(const RasterImage& img, std::size_t c,
                            const RasterImage& plane) {
  require_channels(plane, 1, "replace_channel");
  if (c >= img.channels() || plane.width() != img.width() ||
      plane.height() != img.height()) {
    fail(ErrorKind::kInvalidInput, "replace_channel: plane does not fit image");
  }
  RasterImage out = img;
  auto dst = out.mutable_data();
  const auto src = plane.data();
  for (std::size_t p = 0; p < src.size(); ++p) {
    dst[p * img.channels() + c] = src[p];
  }
  return out;
}

Histogram luma_histogram(const RasterImage& channel) {
  require_channels(channel, 1, "luma_histogram");
  Histogram h;
  for (std::uint8_t v : channel.data()) ++h.bins[v];
  h.total = channel.pixel_count();
  return h;
}

std::array<std::uint8_t, 256> equalization_lut(const Histogram& hist) {
  std::array<std::uint8_t, 256> lut{};
  const auto cdf = hist.cdf();
  std::uint64_t cdf_min = 0;
  for (std::uint64_t c : cdf) {
    if (c != 0) {
      cdf_min = c;
      break;
    }
  }
  const std::uint64_t n = hist.total;
  if (n == cdf_min) {
    for (std::size_t v = 0; v < 256; ++v) lut[v] = static_cast<std::uint8_t>(v);
    return lut;
  }
  // Exact rational rounding: round(num * 255 / den), half away from zero, on
  // nonnegative integers is floor((2 * num * 255 + den) / (2 * den)).
  const std::uint64_t den = n - cdf_min;
  for (std::size_t v = 0; v < 256; ++v) {
    const std::uint64_t num = cdf[v] >= cdf_min ? cdf[v] - cdf_min : 0;
    lut[v] = static_cast<std::uint8_t>((2 * num * 255 + den) / (2 * den));
  }
  return lut;
}

RasterImage equalize_channel(const RasterImage& channel) {
  const auto lut = equalization_lut(luma_histogram(channel));
  RasterImage out = channel;
  for (std::uint8_t& v : out.mutable_data()) v = lut[v];
  return out;
}

RasterImage enhance_he(const RasterImage& img) {
  require_channels(img, 3, "enhance_he");
  const RasterImage ycc = rgb_to_yuv(img);
  const RasterImage luma = equalize_channel(extract_channel(ycc, 0));
  return yuv_to_rgb(replace_channel(ycc, 0, luma));
}

std::vector<HistogramRow> histogram_report(const RasterImage& img) {
  const Histogram h = img.channels() == 3
                          ? luma_histogram(extract_channel(rgb_to_yuv(img), 0))
                          : luma_histogram(img);
  std::vector<HistogramRow> rows(256);
  for (std::uint32_t v = 0; v < 256; ++v) rows[v] = {v, h.bins[v]};
  return rows;
}

std::string histogram_csv(const std::vector<HistogramRow>& rows) {
  std::ostringstream os;
  os << "bin,count\n";
  for (const auto& r : rows) os << r.bin << ',' << r.count << '\n';
  return os.str();
}

}  // namespace lowlight

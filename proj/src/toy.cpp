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
#include "lowlight/toy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lowlight/error.hpp"
#include "lowlight/rng.hpp"

namespace lowlight::toy {

namespace {

struct Rect {
  std::size_t x, y, w, h;
};

bool overlaps(const Rect& a, const Rect& b) {
  // one pixel of clearance so components stay separate
  return a.x <= b.x + b.w && b.x <= a.x + a.w && a.y <= b.y + b.h && b.y <= a.y + a.h;
}

std::uint8_t to_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v * 255.0), 0.0, 255.0));
}

RasterImage draw_scene(Rng& rng, std::size_t size, double scale,
                       std::vector<Rect>& rects) {
  std::vector<std::uint8_t> px(size * size * 3);
  double bg[3];
  const double level = 0.35 + 0.15 * rng.uniform();
  for (double& c : bg) c = level + 0.05 * (rng.uniform() - 0.5);
  for (std::size_t i = 0; i < size * size; ++i) {
    const double n = 0.06 * (rng.uniform() - 0.5);
    for (int c = 0; c < 3; ++c) px[i * 3 + c] = to_u8((bg[c] + n) * scale);
  }
  rects.clear();
  const std::size_t want = 1 + rng.uniform_index(2);
  const std::size_t lo = std::max<std::size_t>(3, size / 5);
  const std::size_t hi = std::max(lo, size * 3 / 8);
  for (int attempt = 0; attempt < 50 && rects.size() < want; ++attempt) {
    Rect r;
    r.w = lo + rng.uniform_index(hi - lo + 1);
    r.h = lo + rng.uniform_index(hi - lo + 1);
    r.x = rng.uniform_index(size - r.w + 1);
    r.y = rng.uniform_index(size - r.h + 1);
    if (std::any_of(rects.begin(), rects.end(),
                    [&](const Rect& o) { return overlaps(r, o); })) {
      continue;
    }
    rects.push_back(r);
    const double fg = 0.8 + 0.2 * rng.uniform();
    for (std::size_t y = r.y; y < r.y + r.h; ++y) {
      for (std::size_t x = r.x; x < r.x + r.w; ++x) {
        for (int c = 0; c < 3; ++c) px[(y * size + x) * 3 + c] = to_u8(fg * scale);
      }
    }
  }
  return RasterImage(size, size, 3, std::move(px));
}

}  // namespace

std::string image_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "toy%04zu", i);
  return buf;
}

ToyDomains make_domains(std::size_t count, std::size_t size, std::uint64_t seed) {
  if (count == 0 || size < 8) fail(ErrorKind::kInvalidInput, "toy domains need count >= 1, size >= 8");
  Rng rng_a(seed);
  Rng rng_b(seed ^ 0xb0b0b0b0b0b0b0b0ULL);
  ToyDomains out;
  std::vector<Rect> rects;
  for (std::size_t i = 0; i < count; ++i) {
    out.a.push_back(draw_scene(rng_a, size, kDarkScale, rects));
    std::vector<eval::GroundTruth> boxes;
    for (const Rect& r : rects) {
      boxes.push_back({image_id(i), 0,
                       {static_cast<double>(r.x), static_cast<double>(r.y),
                        static_cast<double>(r.w), static_cast<double>(r.h)}});
    }
    out.a_boxes.push_back(std::move(boxes));
    out.b.push_back(draw_scene(rng_b, size, 1.0, rects));
  }
  return out;
}

namespace {

double luma(const RasterImage& img, std::size_t i) {
  const auto d = img.data();
  if (img.channels() == 1) return d[i];
  return 0.299 * d[i * 3] + 0.587 * d[i * 3 + 1] + 0.114 * d[i * 3 + 2];
}

}  // namespace

double mean_luma(const RasterImage& img) {
  double total = 0.0;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) total += luma(img, i);
  return total / (255.0 * static_cast<double>(img.pixel_count()));
}

std::vector<eval::Detection> detect(const RasterImage& img,
                                    const std::string& image_id,
                                    double threshold, std::size_t min_area) {
  const std::size_t w = img.width(), h = img.height();
  std::vector<double> y(w * h);
  for (std::size_t i = 0; i < w * h; ++i) y[i] = luma(img, i) / 255.0;
  std::vector<bool> seen(w * h, false);
  std::vector<eval::Detection> out;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < w * h; ++start) {
    if (seen[start] || y[start] < threshold) continue;
    std::size_t x0 = w, y0 = h, x1 = 0, y1 = 0, area = 0;
    double sum = 0.0;
    stack.assign(1, start);
    seen[start] = true;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const std::size_t px = p % w, py = p / w;
      x0 = std::min(x0, px);
      x1 = std::max(x1, px);
      y0 = std::min(y0, py);
      y1 = std::max(y1, py);
      ++area;
      sum += y[p];
      auto visit = [&](std::size_t q) {
        if (!seen[q] && y[q] >= threshold) {
          seen[q] = true;
          stack.push_back(q);
        }
      };
      if (px > 0) visit(p - 1);
      if (px + 1 < w) visit(p + 1);
      if (py > 0) visit(p - w);
      if (py + 1 < h) visit(p + w);
    }
    if (area < min_area) continue;
    out.push_back({image_id, 0,
                   {static_cast<double>(x0), static_cast<double>(y0),
                    static_cast<double>(x1 - x0 + 1), static_cast<double>(y1 - y0 + 1)},
                   std::clamp(sum / static_cast<double>(area), 0.0, 1.0)});
  }
  return out;
}

}  // namespace lowlight::toy

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
#ifndef LOWLIGHT_TOY_HPP_
#define LOWLIGHT_TOY_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lowlight/evalmap.hpp"
#include "lowlight/pixelops.hpp"

namespace lowlight::toy {

// Synthetic unpaired domains for small-scale experiments. Scenes are a
// textured mid-grey background with one or two bright rectangles; domain A
// holds the same kind of scene scaled down to a quarter of its brightness.
struct ToyDomains {
  std::vector<RasterImage> a;  // dark
  std::vector<RasterImage> b;  // normally lit, drawn independently of `a`
  std::vector<std::vector<eval::GroundTruth>> a_boxes;  // per image of `a`
};

constexpr double kDarkScale = 0.25;

ToyDomains make_domains(std::size_t count, std::size_t size, std::uint64_t seed);

// Image id used for toy image `i` ("toy0003").
std::string image_id(std::size_t i);

// Mean of the BT.601 luma over all pixels, scaled to [0,1].
double mean_luma(const RasterImage& img);

// Thresholds luma at `threshold` (in [0,1]) and reports each 4-connected
// component of at least `min_area` pixels as a class-0 detection whose score
// is the component's mean luma.
std::vector<eval::Detection> detect(const RasterImage& img,
                                    const std::string& image_id,
                                    double threshold = 0.6,
                                    std::size_t min_area = 2);

}  // namespace lowlight::toy

#endif  // LOWLIGHT_TOY_HPP_

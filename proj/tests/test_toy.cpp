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
#include <doctest.h>

#include "lowlight/toy.hpp"

using namespace lowlight;

TEST_CASE("toy domains differ in brightness") {
  const toy::ToyDomains d = toy::make_domains(16, 16, 5);
  REQUIRE(d.a.size() == 16);
  REQUIRE(d.b.size() == 16);
  REQUIRE(d.a_boxes.size() == 16);
  double la = 0, lb = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(d.a[i].width() == 16);
    CHECK(d.a[i].channels() == 3);
    CHECK(toy::mean_luma(d.a[i]) < 0.3);
    la += toy::mean_luma(d.a[i]);
    lb += toy::mean_luma(d.b[i]);
    CHECK(!d.a_boxes[i].empty());
    CHECK(d.a_boxes[i].size() <= 2);
    for (const auto& g : d.a_boxes[i]) {
      CHECK(g.image_id == toy::image_id(i));
      CHECK(g.class_id == 0);
      CHECK(g.box.left >= 0);
      CHECK(g.box.left + g.box.width <= 16);
    }
  }
  CHECK(lb > 2 * la);
}

TEST_CASE("toy domains are reproducible") {
  const auto x = toy::make_domains(4, 12, 9);
  const auto y = toy::make_domains(4, 12, 9);
  const auto z = toy::make_domains(4, 12, 10);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(x.a[i] == y.a[i]);
    CHECK(x.b[i] == y.b[i]);
  }
  CHECK(!(x.a[0] == z.a[0]));
  CHECK(toy::image_id(7) == "toy0007");
}

TEST_CASE("toy detector finds bright regions") {
  RasterImage img(10, 8, 3);
  auto px = img.mutable_data();
  auto set = [&](std::size_t x, std::size_t y, std::uint8_t v) {
    for (std::size_t c = 0; c < 3; ++c) px[(y * 10 + x) * 3 + c] = v;
  };
  for (std::size_t y = 2; y < 5; ++y)
    for (std::size_t x = 1; x < 4; ++x)
      set(x, y, 230);
  set(8, 6, 255);  // below the area floor
  const auto dets = toy::detect(img, "im");
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].image_id == "im");
  CHECK(dets[0].class_id == 0);
  CHECK(dets[0].box.left == 1);
  CHECK(dets[0].box.top == 2);
  CHECK(dets[0].box.width == 3);
  CHECK(dets[0].box.height == 3);
  CHECK(dets[0].score == doctest::Approx(230.0 / 255.0));
  CHECK(toy::detect(RasterImage(4, 4, 3), "dark").empty());
}

TEST_CASE("toy detector finds the lit boxes and none of the dark ones") {
  const auto d = toy::make_domains(8, 16, 3);
  for (std::size_t i = 0; i < d.a.size(); ++i) {
    CHECK(toy::detect(d.a[i], toy::image_id(i)).empty());
  }
  std::size_t found = 0;
  for (const auto& img : d.b) found += toy::detect(img, "b").size();
  CHECK(found >= d.b.size());
}

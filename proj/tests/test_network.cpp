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
#include <cmath>
#include <set>

#include <doctest.h>

#include "lowlight/error.hpp"
#include "lowlight/gan/network.hpp"
#include "lowlight/gan/train.hpp"
#include "test_util.hpp"

using namespace lowlight;
using namespace lowlight::gan;

namespace {

Shape forward_shape(const NetworkSpec& spec, const Shape& in, std::uint64_t seed = 1) {
  Rng rng(seed);
  Network net(spec, rng);
  Rng data(seed + 1);
  return net.forward(ag::constant(testing::random_tensor(in, data))).shape();
}

}  // namespace

TEST_CASE("resnet generator shapes") {
  CHECK(infer_output_shape(build_resnet9_generator(3, 64, 9), {1, 3, 256, 256}) ==
        Shape{1, 3, 256, 256});
  CHECK(infer_output_shape(build_resnet9_generator(3, 8, 2), {4, 3, 16, 16}) ==
        Shape{4, 3, 16, 16});
  // full-resolution forward at a narrow width
  CHECK(forward_shape(build_resnet9_generator(3, 2, 9), {1, 3, 256, 256}) ==
        Shape{1, 3, 256, 256});
  CHECK(forward_shape(build_resnet9_generator(3, 8, 2), {2, 3, 16, 16}) == Shape{2, 3, 16, 16});
  CHECK_THROWS_AS(build_resnet9_generator(3, 8, 0), Error);
  CHECK_THROWS_AS(build_resnet9_generator(3, 0, 2), Error);
}

TEST_CASE("unet generator shapes") {
  CHECK(infer_output_shape(build_unet256_generator(3, 64, 8), {1, 3, 256, 256}) ==
        Shape{1, 3, 256, 256});
  CHECK(forward_shape(build_unet256_generator(3, 2, 8), {1, 3, 256, 256}) ==
        Shape{1, 3, 256, 256});
  CHECK(forward_shape(build_unet256_generator(3, 4, 2), {1, 3, 16, 16}) == Shape{1, 3, 16, 16});
  try {
    infer_output_shape(build_unet256_generator(3, 8, 3), {1, 3, 100, 100});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidConfig);
  }
  Rng rng(2);
  Network net(build_unet256_generator(3, 4, 3), rng);
  CHECK_THROWS_AS(net.forward(ag::constant(Tensor({1, 3, 12, 16}))), Error);
}

TEST_CASE("shape algebra agrees with real forwards") {
  Rng rng(3);
  for (int t = 0; t < 12; ++t) {
    const std::size_t base = 1 + rng.uniform_index(4);
    NetworkSpec spec;
    std::size_t mult = 1;
    switch (t % 3) {
      case 0:
        spec = build_resnet9_generator(3, base, 1 + rng.uniform_index(3));
        mult = 4;
        break;
      case 1: {
        const std::size_t depth = 1 + rng.uniform_index(3);
        spec = build_unet256_generator(3, base, depth);
        mult = std::size_t{1} << depth;
        break;
      }
      default:
        spec = build_patchgan(3, base, 1 + rng.uniform_index(3));
        mult = 16;
        break;
    }
    const Shape in{1 + rng.uniform_index(2), 3, mult * (2 + rng.uniform_index(2)),
                   mult * (2 + rng.uniform_index(2))};
    CAPTURE(spec.name);
    CHECK(infer_output_shape(spec, in) == forward_shape(spec, in, t));
  }
}

TEST_CASE("patchgan shapes and receptive field") {
  const NetworkSpec d = build_patchgan(3, 64);
  CHECK(infer_output_shape(d, {1, 3, 256, 256}) == Shape{1, 1, 30, 30});
  CHECK(infer_output_shape(d, {1, 3, 70, 70}) == Shape{1, 1, 6, 6});
  CHECK(forward_shape(build_patchgan(3, 2), {1, 3, 256, 256}) == Shape{1, 1, 30, 30});
  const ReceptiveField rf = receptive_field(d);
  CHECK(rf.size == 70);
  CHECK(rf.jump == 8);
  // toy discriminator still yields a map on 16x16 inputs
  CHECK(infer_output_shape(build_patchgan(3, 8, 2), {1, 3, 16, 16}) == Shape{1, 1, 2, 2});
}

TEST_CASE("patchgan unit sees exactly its analytic window") {
  // Instance norm mixes all positions, so the window is probed on the same
  // stack without normalization layers.
  NetworkSpec spec = build_patchgan(1, 2);
  std::erase_if(spec.layers, [](const LayerDesc& l) { return l.kind == LayerKind::kInstanceNorm; });
  Rng rng(4);
  Network net(spec, rng);
  const ReceptiveField rf = receptive_field(spec);
  REQUIRE(rf.size == 70);
  ag::Var x = ag::parameter(testing::random_tensor({1, 1, 70, 70}, rng));
  const ag::Var y = net.forward(x);
  REQUIRE(y.shape() == Shape{1, 1, 6, 6});
  for (std::size_t oy : {0u, 3u, 5u}) {
    for (std::size_t ox : {0u, 2u, 5u}) {
      Tensor sel(y.shape(), 0.0);
      sel.at(0, 0, oy, ox) = 1.0;
      const std::vector<ag::Var> ps{x};
      const Tensor g = ag::gradients(ag::sum(ag::mul(y, ag::constant(sel))), ps)[0];
      const long y0 = long(oy * rf.jump) - long(rf.start), x0 = long(ox * rf.jump) - long(rf.start);
      long min_i = 70, max_i = -1, min_j = 70, max_j = -1;
      for (long i = 0; i < 70; ++i)
        for (long j = 0; j < 70; ++j) {
          if (g.at(0, 0, i, j) == 0.0) continue;
          min_i = std::min(min_i, i);
          max_i = std::max(max_i, i);
          min_j = std::min(min_j, j);
          max_j = std::max(max_j, j);
        }
      CHECK(min_i == std::max(0L, y0));
      CHECK(max_i == std::min(69L, y0 + long(rf.size) - 1));
      CHECK(min_j == std::max(0L, x0));
      CHECK(max_j == std::min(69L, x0 + long(rf.size) - 1));
    }
  }
}

TEST_CASE("zero weights give the final bias everywhere") {
  const NetworkSpec spec = build_patchgan(3, 4);
  Rng rng(5);
  Network net(spec, rng);
  for (auto& p : net.parameters()) {
    for (double& v : p.mutable_value().data()) v = 0.0;
  }
  net.parameters().back().mutable_value()[0] = 0.375;
  Rng data(6);
  const Tensor out = net.forward(ag::constant(testing::random_tensor({1, 3, 64, 64}, data))).value();
  for (double v : out.data()) CHECK(v == 0.375);
}

TEST_CASE("zeroed residual blocks act as identity") {
  const NetworkSpec full = build_resnet9_generator(3, 4, 2);
  NetworkSpec trimmed = full;
  trimmed.layers.clear();
  std::set<std::size_t> block_layers;
  int depth = 0;
  for (std::size_t i = 0; i < full.layers.size(); ++i) {
    const auto k = full.layers[i].kind;
    if (k == LayerKind::kSkipPush) ++depth;
    if (depth > 0) block_layers.insert(i);
    else trimmed.layers.push_back(full.layers[i]);
    if (k == LayerKind::kSkipAdd) --depth;
  }
  REQUIRE(!block_layers.empty());
  Rng rng(7);
  Network a(full, rng);
  Network b(trimmed, rng);
  const auto layout = parameter_layout(full);
  std::size_t bi = 0;
  for (std::size_t p = 0; p < layout.size(); ++p) {
    const std::size_t layer = std::stoul(layout[p].path.substr(1, 3));
    if (block_layers.count(layer)) {
      if (layout[p].path.ends_with(".weight") || layout[p].path.ends_with(".bias")) {
        for (double& v : a.parameters()[p].mutable_value().data()) v = 0.0;
      }
    } else {
      b.parameters()[bi++].mutable_value() = a.parameters()[p].value();
    }
  }
  Rng data(8);
  const ag::Var x = ag::constant(testing::random_tensor({1, 3, 16, 16}, data));
  CHECK(a.forward(x).value() == b.forward(x).value());
}

TEST_CASE("normalization round trip") {
  std::vector<std::uint8_t> px(256 * 3);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint8_t>(i / 3);
  const RasterImage img(256, 1, 3, px);
  const Tensor t = normalize_in(img);
  CHECK(t.shape() == Shape{1, 3, 1, 256});
  CHECK(t.at(0, 0, 0, 0) == -1.0);
  CHECK(t.at(0, 2, 0, 255) == 1.0);
  CHECK(denormalize_out(t) == img);
  Tensor wild({1, 3, 1, 2}, std::vector<double>{1.7, -3, 0, 0, 0, 0});
  const RasterImage c = denormalize_out(wild);
  CHECK(c.data()[0] == 255);
  CHECK(c.data()[3] == 0);
  CHECK(c.data()[1] == 128);  // 127.5 rounds away from zero
}

TEST_CASE("translation keeps image size") {
  Rng rng(9);
  for (auto spec : {build_resnet9_generator(3, 4, 1), build_unet256_generator(3, 4, 2)}) {
    Network net(spec, rng);
    const RasterImage img = testing::random_image(12, 8, 3, rng);
    const RasterImage out = translate(net, img);
    CHECK(out.width() == 12);
    CHECK(out.height() == 8);
    CHECK(translate(net.export_weights(), spec, img) == out);
  }
}

TEST_CASE("fingerprints separate architectures") {
  const auto r = build_resnet9_generator(3, 8, 2).fingerprint();
  const auto u = build_unet256_generator(3, 4, 2).fingerprint();
  CHECK(r != u);
  CHECK(r == build_resnet9_generator(3, 8, 2).fingerprint());
  CHECK(r != build_resnet9_generator(3, 8, 3).fingerprint());
  CHECK(r != build_resnet9_generator(3, 16, 2).fingerprint());
}

TEST_CASE("initialization follows the seed") {
  const NetworkSpec spec = build_resnet9_generator(3, 4, 1);
  Rng r1(11), r2(11), r3(12);
  Network a(spec, r1), b(spec, r2), c(spec, r3);
  CHECK(a.export_weights() == b.export_weights());
  CHECK(!(a.export_weights() == c.export_weights()));
  CHECK(a.parameter_count() > 0);
}

TEST_CASE("arch names") {
  CHECK(parse_arch("resnet9") == GeneratorArch::kResnet);
  CHECK(parse_arch("unet256") == GeneratorArch::kUnet);
  CHECK_THROWS_AS(parse_arch("vgg"), Error);
}

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
#ifndef LOWLIGHT_GAN_NETWORK_HPP_
#define LOWLIGHT_GAN_NETWORK_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lowlight/autograd.hpp"
#include "lowlight/gan/weights.hpp"
#include "lowlight/pixelops.hpp"
#include "lowlight/rng.hpp"
#include "lowlight/tensor.hpp"

namespace lowlight::gan {

enum class LayerKind {
  kConv,
  kConvTranspose,
  kInstanceNorm,
  kActivation,
  kMaxPool,
  kSkipPush,    // save the current activation
  kSkipAdd,     // current + most recently saved
  kSkipConcat,  // channel concat of current and most recently saved
};

struct LayerDesc {
  LayerKind kind = LayerKind::kConv;
  std::size_t in_ch = 0;
  std::size_t out_ch = 0;
  std::size_t kernel = 0;
  std::size_t stride = 1;
  std::size_t pad = 0;
  ag::PadMode pad_mode = ag::PadMode::kZero;
  ag::Activation act = ag::Activation::kNone;
};

// Declarative layer stack. Skip links are a stack: every push is consumed by
// exactly one later add/concat, so encoder level i pairs with decoder level i.
struct NetworkSpec {
  std::string name;
  std::size_t in_ch = 3;
  std::size_t base = 0;
  // Spatial extents must be multiples of this (2^depth for U-Net).
  std::size_t extent_multiple = 1;
  std::vector<LayerDesc> layers;

  std::string canonical() const;
  std::uint64_t fingerprint() const;
};

NetworkSpec build_resnet9_generator(std::size_t in_ch, std::size_t base,
                                    std::size_t n_blocks);
NetworkSpec build_unet256_generator(std::size_t in_ch, std::size_t base,
                                    std::size_t depth);
// n_layers = 3 is the 70x70 PatchGAN; smaller stacks suit tiny inputs.
NetworkSpec build_patchgan(std::size_t in_ch, std::size_t base,
                           std::size_t n_layers = 3);

// Output shape for an N,C,H,W input without running the network.
// Error(kInvalidConfig) for extents the architecture cannot take,
// Error(kInvalidShape) for channel or skip mismatches.
Shape infer_output_shape(const NetworkSpec& spec, const Shape& input);

struct ReceptiveField {
  std::size_t size;   // input pixels covered by one output unit, per axis
  std::size_t jump;   // input pixels between adjacent output units
  std::size_t start;  // total padding before the first unit's window
};
// For plain conv/pool stacks (no skips or transposed convs).
ReceptiveField receptive_field(const NetworkSpec& spec);

struct ParamInfo {
  std::string path;
  Shape shape;
};
std::vector<ParamInfo> parameter_layout(const NetworkSpec& spec);

class Network {
 public:
  // Conv weights ~ normal(0, 0.02), biases 0, norm gamma 1 and beta 0; draws
  // taken in parameter_layout order.
  Network(NetworkSpec spec, Rng& rng);
  // Error(kIncompatibleWeights) if the fingerprint or any entry mismatches.
  Network(NetworkSpec spec, const WeightStore& weights);

  const NetworkSpec& spec() const { return spec_; }
  std::vector<ag::Var>& parameters() { return params_; }
  const std::vector<ag::Var>& parameters() const { return params_; }
  std::size_t parameter_count() const;

  ag::Var forward(const ag::Var& x) const;

  // Frozen parameters are constants in new graphs.
  void set_trainable(bool trainable);

  WeightStore export_weights() const;
  void load_weights(const WeightStore& weights);

 private:
  NetworkSpec spec_;
  std::vector<ParamInfo> layout_;
  std::vector<ag::Var> params_;
  // First parameter index of each layer, or -1.
  std::vector<std::ptrdiff_t> layer_param_;
};

// u8 v -> v / 127.5 - 1, as a [1,3,H,W] tensor.
Tensor normalize_in(const RasterImage& img);
// Stacks same-sized images into [N,3,H,W].
Tensor normalize_batch(std::span<const RasterImage> imgs);
// [1,3,H,W] or [3,H,W] -> u8 via (t + 1) * 127.5, clamped, rounded half away.
RasterImage denormalize_out(const Tensor& t);

RasterImage translate(const WeightStore& weights, const NetworkSpec& spec,
                      const RasterImage& img);
RasterImage translate(const Network& net, const RasterImage& img);

}  // namespace lowlight::gan

#endif  // LOWLIGHT_GAN_NETWORK_HPP_

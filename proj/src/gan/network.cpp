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
#include "lowlight/gan/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lowlight/conv.hpp"
#include "lowlight/error.hpp"

namespace lowlight::gan {
namespace {

using ag::Activation;
using ag::PadMode;

LayerDesc conv(std::size_t in, std::size_t out, std::size_t k, std::size_t s,
               std::size_t p, PadMode mode = PadMode::kZero) {
  LayerDesc d;
  d.kind = LayerKind::kConv;
  d.in_ch = in;
  d.out_ch = out;
  d.kernel = k;
  d.stride = s;
  d.pad = p;
  d.pad_mode = mode;
  return d;
}

LayerDesc conv_t(std::size_t in, std::size_t out, std::size_t k, std::size_t s,
                 std::size_t p) {
  LayerDesc d = conv(in, out, k, s, p);
  d.kind = LayerKind::kConvTranspose;
  return d;
}

LayerDesc norm(std::size_t ch) {
  LayerDesc d;
  d.kind = LayerKind::kInstanceNorm;
  d.in_ch = d.out_ch = ch;
  return d;
}

LayerDesc act(Activation a) {
  LayerDesc d;
  d.kind = LayerKind::kActivation;
  d.act = a;
  return d;
}

LayerDesc pool(std::size_t k, std::size_t s) {
  LayerDesc d;
  d.kind = LayerKind::kMaxPool;
  d.kernel = k;
  d.stride = s;
  return d;
}

LayerDesc marker(LayerKind kind) {
  LayerDesc d;
  d.kind = kind;
  return d;
}

void require_positive(std::size_t v, const char* what) {
  if (v == 0) fail(ErrorKind::kInvalidConfig, std::string(what) + " must be >= 1");
}

const char* kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kConvTranspose: return "convT";
    case LayerKind::kInstanceNorm: return "inorm";
    case LayerKind::kActivation: return "act";
    case LayerKind::kMaxPool: return "maxpool";
    case LayerKind::kSkipPush: return "push";
    case LayerKind::kSkipAdd: return "add";
    case LayerKind::kSkipConcat: return "concat";
  }
  return "?";
}

const char* act_name(Activation a) {
  switch (a) {
    case Activation::kNone: return "none";
    case Activation::kRelu: return "relu";
    case Activation::kLeakyRelu: return "lrelu0.2";
    case Activation::kTanh: return "tanh";
  }
  return "?";
}

std::string layer_prefix(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "l%03zu", index);
  return buf;
}

}  // namespace

std::string NetworkSpec::canonical() const {
  std::ostringstream os;
  os << name << ";in=" << in_ch << ";base=" << base
     << ";mult=" << extent_multiple;
  for (const LayerDesc& l : layers) {
    os << ';' << kind_name(l.kind);
    switch (l.kind) {
      case LayerKind::kConv:
      case LayerKind::kConvTranspose:
        os << '(' << l.in_ch << ',' << l.out_ch << ",k" << l.kernel << ",s"
           << l.stride << ",p" << l.pad
           << (l.pad_mode == PadMode::kReflect ? ",reflect" : ",zero") << ')';
        break;
      case LayerKind::kInstanceNorm:
        os << '(' << l.in_ch << ')';
        break;
      case LayerKind::kActivation:
        os << '(' << act_name(l.act) << ')';
        break;
      case LayerKind::kMaxPool:
        os << "(k" << l.kernel << ",s" << l.stride << ')';
        break;
      default:
        break;
    }
  }
  return os.str();
}

std::uint64_t NetworkSpec::fingerprint() const {
  // FNV-1a, 64-bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

NetworkSpec build_resnet9_generator(std::size_t in_ch, std::size_t base,
                                    std::size_t n_blocks) {
  require_positive(in_ch, "in_ch");
  require_positive(base, "base");
  require_positive(n_blocks, "n_blocks");
  NetworkSpec s;
  s.name = "resnet";
  s.in_ch = in_ch;
  s.base = base;
  s.extent_multiple = 4;
  auto& L = s.layers;
  L.push_back(conv(in_ch, base, 7, 1, 3, PadMode::kReflect));
  L.push_back(norm(base));
  L.push_back(act(Activation::kRelu));
  L.push_back(conv(base, 2 * base, 3, 2, 1));
  L.push_back(norm(2 * base));
  L.push_back(act(Activation::kRelu));
  L.push_back(conv(2 * base, 4 * base, 3, 2, 1));
  L.push_back(norm(4 * base));
  L.push_back(act(Activation::kRelu));
  const std::size_t trunk = 4 * base;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    L.push_back(marker(LayerKind::kSkipPush));
    L.push_back(conv(trunk, trunk, 3, 1, 1, PadMode::kReflect));
    L.push_back(norm(trunk));
    L.push_back(act(Activation::kRelu));
    L.push_back(conv(trunk, trunk, 3, 1, 1, PadMode::kReflect));
    L.push_back(norm(trunk));
    L.push_back(marker(LayerKind::kSkipAdd));
  }
  L.push_back(conv_t(4 * base, 2 * base, 4, 2, 1));
  L.push_back(norm(2 * base));
  L.push_back(act(Activation::kRelu));
  L.push_back(conv_t(2 * base, base, 4, 2, 1));
  L.push_back(norm(base));
  L.push_back(act(Activation::kRelu));
  L.push_back(conv(base, in_ch, 7, 1, 3, PadMode::kReflect));
  L.push_back(act(Activation::kTanh));
  s.name += std::to_string(n_blocks);
  return s;
}

NetworkSpec build_unet256_generator(std::size_t in_ch, std::size_t base,
                                    std::size_t depth) {
  require_positive(in_ch, "in_ch");
  require_positive(base, "base");
  require_positive(depth, "depth");
  if (depth > 16) fail(ErrorKind::kInvalidConfig, "depth must be <= 16");
  const auto width = [base](std::size_t level) {
    return std::min(base << std::min<std::size_t>(level, 3), 8 * base);
  };
  NetworkSpec s;
  s.name = "unet_d" + std::to_string(depth);
  s.in_ch = in_ch;
  s.base = base;
  s.extent_multiple = std::size_t{1} << depth;
  auto& L = s.layers;
  std::size_t ch = in_ch;
  for (std::size_t i = 0; i < depth; ++i) {
    L.push_back(conv(ch, width(i), 3, 1, 1));
    L.push_back(norm(width(i)));
    L.push_back(act(Activation::kLeakyRelu));
    L.push_back(marker(LayerKind::kSkipPush));
    L.push_back(pool(2, 2));
    ch = width(i);
  }
  L.push_back(conv(ch, width(depth), 3, 1, 1));
  L.push_back(act(Activation::kLeakyRelu));
  ch = width(depth);
  for (std::size_t level = depth; level-- > 0;) {
    L.push_back(conv_t(ch, width(level), 4, 2, 1));
    L.push_back(norm(width(level)));
    L.push_back(act(Activation::kRelu));
    L.push_back(marker(LayerKind::kSkipConcat));
    L.push_back(conv(2 * width(level), width(level), 3, 1, 1));
    L.push_back(norm(width(level)));
    L.push_back(act(Activation::kRelu));
    ch = width(level);
  }
  L.push_back(conv(ch, in_ch, 1, 1, 0));
  L.push_back(act(Activation::kTanh));
  return s;
}

NetworkSpec build_patchgan(std::size_t in_ch, std::size_t base,
                           std::size_t n_layers) {
  require_positive(in_ch, "in_ch");
  require_positive(base, "base");
  require_positive(n_layers, "n_layers");
  NetworkSpec s;
  s.name = "patchgan_n" + std::to_string(n_layers);
  s.in_ch = in_ch;
  s.base = base;
  auto& L = s.layers;
  L.push_back(conv(in_ch, base, 4, 2, 1));
  L.push_back(act(Activation::kLeakyRelu));
  std::size_t ch = base;
  for (std::size_t n = 1; n < n_layers; ++n) {
    const std::size_t out = base * std::min<std::size_t>(std::size_t{1} << n, 8);
    L.push_back(conv(ch, out, 4, 2, 1));
    L.push_back(norm(out));
    L.push_back(act(Activation::kLeakyRelu));
    ch = out;
  }
  const std::size_t out =
      base * std::min<std::size_t>(std::size_t{1} << std::min<std::size_t>(n_layers, 3), 8);
  L.push_back(conv(ch, out, 4, 1, 1));
  L.push_back(norm(out));
  L.push_back(act(Activation::kLeakyRelu));
  L.push_back(conv(out, 1, 4, 1, 1));
  return s;
}

Shape infer_output_shape(const NetworkSpec& spec, const Shape& input) {
  if (input.size() != 4) {
    fail(ErrorKind::kInvalidShape, "expected N,C,H,W input, got " + shape_string(input));
  }
  if (input[1] != spec.in_ch) {
    fail(ErrorKind::kInvalidShape, spec.name + ": expected " +
                                       std::to_string(spec.in_ch) + " input channels");
  }
  if (input[2] % spec.extent_multiple != 0 || input[3] % spec.extent_multiple != 0) {
    fail(ErrorKind::kInvalidConfig,
         spec.name + ": input extent " + std::to_string(input[2]) + "x" +
             std::to_string(input[3]) + " is not divisible by " +
             std::to_string(spec.extent_multiple));
  }
  Shape cur = input;
  std::vector<Shape> saved;
  for (const LayerDesc& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::kConv:
        if (cur[1] != l.in_ch) fail(ErrorKind::kInvalidShape, "channel mismatch at conv");
        if (l.pad_mode == PadMode::kReflect && (l.pad >= cur[2] || l.pad >= cur[3])) {
          fail(ErrorKind::kInvalidConfig, "reflect pad larger than input extent");
        }
        cur = {cur[0], l.out_ch, conv::out_extent(cur[2], l.kernel, l.stride, l.pad),
               conv::out_extent(cur[3], l.kernel, l.stride, l.pad)};
        break;
      case LayerKind::kConvTranspose:
        if (cur[1] != l.in_ch) fail(ErrorKind::kInvalidShape, "channel mismatch at convT");
        cur = {cur[0], l.out_ch,
               conv::transpose_out_extent(cur[2], l.kernel, l.stride, l.pad),
               conv::transpose_out_extent(cur[3], l.kernel, l.stride, l.pad)};
        break;
      case LayerKind::kInstanceNorm:
        if (cur[1] != l.in_ch) fail(ErrorKind::kInvalidShape, "channel mismatch at norm");
        break;
      case LayerKind::kActivation:
        break;
      case LayerKind::kMaxPool:
        cur = {cur[0], cur[1], conv::out_extent(cur[2], l.kernel, l.stride, 0),
               conv::out_extent(cur[3], l.kernel, l.stride, 0)};
        break;
      case LayerKind::kSkipPush:
        saved.push_back(cur);
        break;
      case LayerKind::kSkipAdd:
      case LayerKind::kSkipConcat: {
        if (saved.empty()) fail(ErrorKind::kInvalidShape, "skip without saved activation");
        const Shape skip = saved.back();
        saved.pop_back();
        if (skip[0] != cur[0] || skip[2] != cur[2] || skip[3] != cur[3] ||
            (l.kind == LayerKind::kSkipAdd && skip[1] != cur[1])) {
          fail(ErrorKind::kInvalidShape, "skip shape mismatch " + shape_string(skip) +
                                             " vs " + shape_string(cur));
        }
        if (l.kind == LayerKind::kSkipConcat) cur[1] += skip[1];
        break;
      }
    }
  }
  if (!saved.empty()) fail(ErrorKind::kInvalidShape, "unconsumed skip link");
  return cur;
}

ReceptiveField receptive_field(const NetworkSpec& spec) {
  ReceptiveField rf{1, 1, 0};
  for (const LayerDesc& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::kConv:
      case LayerKind::kMaxPool:
        rf.size += (l.kernel - 1) * rf.jump;
        rf.start += l.pad * rf.jump;
        rf.jump *= l.stride;
        break;
      case LayerKind::kInstanceNorm:
      case LayerKind::kActivation:
        break;
      default:
        fail(ErrorKind::kInvalidConfig,
             "receptive_field: only plain conv/pool stacks are supported");
    }
  }
  return rf;
}

std::vector<ParamInfo> parameter_layout(const NetworkSpec& spec) {
  std::vector<ParamInfo> out;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerDesc& l = spec.layers[i];
    const std::string p = layer_prefix(i);
    switch (l.kind) {
      case LayerKind::kConv:
        out.push_back({p + ".weight", {l.out_ch, l.in_ch, l.kernel, l.kernel}});
        out.push_back({p + ".bias", {l.out_ch}});
        break;
      case LayerKind::kConvTranspose:
        out.push_back({p + ".weight", {l.in_ch, l.out_ch, l.kernel, l.kernel}});
        out.push_back({p + ".bias", {l.out_ch}});
        break;
      case LayerKind::kInstanceNorm:
        out.push_back({p + ".gamma", {l.in_ch}});
        out.push_back({p + ".beta", {l.in_ch}});
        break;
      default:
        break;
    }
  }
  return out;
}

namespace {

std::vector<std::ptrdiff_t> first_param_index(const NetworkSpec& spec) {
  std::vector<std::ptrdiff_t> idx(spec.layers.size(), -1);
  std::ptrdiff_t next = 0;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    switch (spec.layers[i].kind) {
      case LayerKind::kConv:
      case LayerKind::kConvTranspose:
      case LayerKind::kInstanceNorm:
        idx[i] = next;
        next += 2;
        break;
      default:
        break;
    }
  }
  return idx;
}

}  // namespace

Network::Network(NetworkSpec spec, Rng& rng)
    : spec_(std::move(spec)),
      layout_(parameter_layout(spec_)),
      layer_param_(first_param_index(spec_)) {
  params_.reserve(layout_.size());
  for (const ParamInfo& info : layout_) {
    Tensor t(info.shape);
    const bool is_weight = info.path.ends_with(".weight");
    const bool is_gamma = info.path.ends_with(".gamma");
    for (double& v : t.data()) {
      if (is_weight) v = rng.normal(0.0, 0.02);
      else if (is_gamma) v = 1.0;
    }
    params_.push_back(ag::parameter(std::move(t)));
  }
}

Network::Network(NetworkSpec spec, const WeightStore& weights)
    : spec_(std::move(spec)),
      layout_(parameter_layout(spec_)),
      layer_param_(first_param_index(spec_)) {
  for (const ParamInfo& info : layout_) {
    params_.push_back(ag::parameter(Tensor(info.shape)));
  }
  load_weights(weights);
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value().numel();
  return n;
}

void Network::set_trainable(bool trainable) {
  for (auto& p : params_) p.node()->requires_grad = trainable;
}

ag::Var Network::forward(const ag::Var& input) const {
  infer_output_shape(spec_, input.shape());
  ag::Var x = input;
  std::vector<ag::Var> saved;
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    const LayerDesc& l = spec_.layers[i];
    const std::ptrdiff_t p = layer_param_[i];
    switch (l.kind) {
      case LayerKind::kConv:
        x = ag::conv2d(x, params_[p], params_[p + 1], l.stride, l.pad, l.pad_mode);
        break;
      case LayerKind::kConvTranspose:
        x = ag::conv_transpose2d(x, params_[p], params_[p + 1], l.stride, l.pad);
        break;
      case LayerKind::kInstanceNorm:
        x = ag::instance_norm(x, params_[p], params_[p + 1]);
        break;
      case LayerKind::kActivation:
        x = ag::activation(x, l.act);
        break;
      case LayerKind::kMaxPool:
        x = ag::max_pool2d(x, l.kernel, l.stride);
        break;
      case LayerKind::kSkipPush:
        saved.push_back(x);
        break;
      case LayerKind::kSkipAdd:
        x = ag::add(x, saved.back());
        saved.pop_back();
        break;
      case LayerKind::kSkipConcat:
        x = ag::concat_channels(x, saved.back());
        saved.pop_back();
        break;
    }
  }
  return x;
}

WeightStore Network::export_weights() const {
  WeightStore store;
  store.fingerprint = spec_.fingerprint();
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    StoredTensor t;
    t.shape = layout_[i].shape;
    const auto v = params_[i].value().data();
    t.values.reserve(v.size());
    for (double d : v) t.values.push_back(static_cast<float>(d));
    store.entries.emplace(layout_[i].path, std::move(t));
  }
  return store;
}

void Network::load_weights(const WeightStore& weights) {
  if (weights.fingerprint != spec_.fingerprint()) {
    fail(ErrorKind::kIncompatibleWeights,
         "weights were produced for a different architecture than " + spec_.name);
  }
  if (weights.entries.size() != layout_.size()) {
    fail(ErrorKind::kIncompatibleWeights, "weight entry count does not match " + spec_.name);
  }
  std::vector<Tensor> staged;
  staged.reserve(layout_.size());
  for (const ParamInfo& info : layout_) {
    const auto it = weights.entries.find(info.path);
    if (it == weights.entries.end() || it->second.shape != info.shape) {
      fail(ErrorKind::kIncompatibleWeights, "missing or mis-shaped entry " + info.path);
    }
    std::vector<double> v(it->second.values.begin(), it->second.values.end());
    staged.emplace_back(info.shape, std::move(v));
  }
  for (std::size_t i = 0; i < staged.size(); ++i) {
    params_[i].mutable_value() = std::move(staged[i]);
  }
}

Tensor normalize_in(const RasterImage& img) {
  return normalize_batch(std::span<const RasterImage>(&img, 1));
}

Tensor normalize_batch(std::span<const RasterImage> imgs) {
  if (imgs.empty()) fail(ErrorKind::kInvalidInput, "normalize_batch: no images");
  const std::size_t w = imgs[0].width(), h = imgs[0].height();
  Tensor out({imgs.size(), 3, h, w});
  for (std::size_t n = 0; n < imgs.size(); ++n) {
    const RasterImage& img = imgs[n];
    if (img.channels() != 3) fail(ErrorKind::kInvalidInput, "normalize_in: 3 channels required");
    if (img.width() != w || img.height() != h) {
      fail(ErrorKind::kInvalidShape, "normalize_batch: images differ in size");
    }
    const auto d = img.data();
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x)
        for (std::size_t c = 0; c < 3; ++c)
          out.at(n, c, y, x) = d[(y * w + x) * 3 + c] / 127.5 - 1.0;
  }
  return out;
}

RasterImage denormalize_out(const Tensor& t) {
  Tensor v = t;
  if (t.rank() == 3) v = t.reshaped({1, t.dim(0), t.dim(1), t.dim(2)});
  if (v.rank() != 4 || v.dim(0) != 1 || v.dim(1) != 3) {
    fail(ErrorKind::kInvalidShape, "denormalize_out: expected [1,3,H,W], got " +
                                       shape_string(t.shape()));
  }
  const std::size_t h = v.dim(2), w = v.dim(3);
  std::vector<std::uint8_t> data(w * h * 3);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x)
      for (std::size_t c = 0; c < 3; ++c) {
        const double s = (v.at(0, c, y, x) + 1.0) * 127.5;
        // NaN maps to 0.
        const double r = std::isnan(s) ? 0.0 : std::clamp(std::round(s), 0.0, 255.0);
        data[(y * w + x) * 3 + c] = static_cast<std::uint8_t>(r);
      }
  return RasterImage(w, h, 3, std::move(data));
}

RasterImage translate(const Network& net, const RasterImage& img) {
  const ag::Var out = net.forward(ag::constant(normalize_in(img)));
  return denormalize_out(out.value());
}

RasterImage translate(const WeightStore& weights, const NetworkSpec& spec,
                      const RasterImage& img) {
  const Network net(spec, weights);
  return translate(net, img);
}

}  // namespace lowlight::gan

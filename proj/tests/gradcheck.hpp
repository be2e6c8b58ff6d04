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
#ifndef LOWLIGHT_TESTS_GRADCHECK_HPP_
#define LOWLIGHT_TESTS_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lowlight/autograd.hpp"
#include "lowlight/rng.hpp"
#include "lowlight/tensor.hpp"

// Central finite-difference checks for every differentiable primitive.
namespace lowlight::testing {

struct GradCase {
  std::string op;
  std::vector<Tensor> inputs;
  std::function<ag::Var(const std::vector<ag::Var>&)> f;
};

struct GradResult {
  double max_rel = 0;
  std::size_t checked = 0;
};

inline constexpr double kFdStep = 1e-5;
// Entries where both gradients are below this are treated as exact zeros.
inline constexpr double kZeroFloor = 1e-9;

inline double relative_error(double a, double n) {
  const double scale = std::max(std::abs(a), std::abs(n));
  if (scale < kZeroFloor) return 0.0;
  return std::abs(a - n) / scale;
}

// loss = sum(f(inputs) * w) with a fixed random w.
inline GradResult check_gradients(const GradCase& c, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ag::Var> vars;
  for (const Tensor& t : c.inputs) vars.push_back(ag::parameter(t));
  const ag::Var probe = c.f(vars);
  Tensor w(probe.shape());
  for (double& v : w.data()) v = rng.normal();
  const ag::Var wv = ag::constant(w);
  auto loss_of = [&](const std::vector<ag::Var>& in) {
    return ag::sum(ag::mul(c.f(in), wv));
  };
  const std::vector<Tensor> analytic = ag::gradients(loss_of(vars), vars);

  GradResult res;
  for (std::size_t k = 0; k < c.inputs.size(); ++k) {
    for (std::size_t i = 0; i < c.inputs[k].numel(); ++i) {
      std::vector<ag::Var> plus, minus;
      for (std::size_t j = 0; j < c.inputs.size(); ++j) {
        Tensor tp = c.inputs[j], tm = c.inputs[j];
        if (j == k) {
          tp[i] += kFdStep;
          tm[i] -= kFdStep;
        }
        plus.push_back(ag::constant(std::move(tp)));
        minus.push_back(ag::constant(std::move(tm)));
      }
      const double numeric =
          (loss_of(plus).item() - loss_of(minus).item()) / (2 * kFdStep);
      res.max_rel = std::max(res.max_rel, relative_error(analytic[k][i], numeric));
      ++res.checked;
    }
  }
  return res;
}

namespace gc_detail {

inline Tensor rand(const Shape& s, Rng& rng, double sd = 1.0) {
  Tensor t(s);
  for (double& v : t.data()) v = rng.normal() * sd;
  return t;
}

// Values bounded away from zero so kinks stay out of the FD stencil.
inline Tensor rand_off_zero(const Shape& s, Rng& rng) {
  Tensor t(s);
  for (double& v : t.data()) {
    do {
      v = rng.normal();
    } while (std::abs(v) < 1e-2);
  }
  return t;
}

inline Shape rand_shape(Rng& rng) {
  Shape s(1 + rng.uniform_index(4));
  for (auto& d : s) d = 1 + rng.uniform_index(4);
  return s;
}

inline Shape rand_image_shape(Rng& rng, std::size_t min_hw = 1, std::size_t max_c = 3) {
  return {1 + rng.uniform_index(2), 1 + rng.uniform_index(max_c),
          min_hw + rng.uniform_index(5), min_hw + rng.uniform_index(5)};
}

// Entries spaced at least `gap` apart so a window max is never tied.
inline Tensor distinct_values(const Shape& s, Rng& rng, double gap) {
  Tensor t(s);
  std::vector<std::size_t> perm(t.numel());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    t[perm[i]] = (static_cast<double>(i) - static_cast<double>(perm.size()) / 2) * gap;
  }
  return t;
}

}  // namespace gc_detail

inline std::vector<std::string> gradcheck_primitives() {
  return {"add",       "sub",        "mul",         "scale",   "sum",
          "mean",      "conv2d",     "conv2d_reflect", "conv_transpose2d",
          "reflect_pad2d", "instance_norm", "relu", "leaky_relu", "tanh",
          "max_pool2d", "concat_channels", "l1_loss", "mse_loss"};
}

// `count` seeded cases for one primitive.
inline std::vector<GradCase> gradcheck_cases(const std::string& op, std::size_t count,
                                             std::uint64_t seed) {
  using namespace gc_detail;
  Rng rng(seed);
  std::vector<GradCase> out;
  while (out.size() < count) {
    GradCase c;
    c.op = op;
    if (op == "add" || op == "sub" || op == "mul" || op == "mse_loss") {
      const Shape s = rand_shape(rng);
      c.inputs = {rand(s, rng), rand(s, rng)};
      if (op == "add") c.f = [](const auto& v) { return ag::add(v[0], v[1]); };
      if (op == "sub") c.f = [](const auto& v) { return ag::sub(v[0], v[1]); };
      if (op == "mul") c.f = [](const auto& v) { return ag::mul(v[0], v[1]); };
      if (op == "mse_loss") c.f = [](const auto& v) { return ag::mse_loss(v[0], v[1]); };
    } else if (op == "l1_loss") {
      const Shape s = rand_shape(rng);
      Tensor a = rand(s, rng);
      Tensor b = rand_off_zero(s, rng);
      for (std::size_t i = 0; i < a.numel(); ++i) b[i] += a[i];  // |a-b| >= 1e-2
      c.inputs = {a, b};
      c.f = [](const auto& v) { return ag::l1_loss(v[0], v[1]); };
    } else if (op == "scale") {
      const double k = rng.normal() * 3;
      c.inputs = {rand(rand_shape(rng), rng)};
      c.f = [k](const auto& v) { return ag::scale(v[0], k); };
    } else if (op == "sum" || op == "mean") {
      c.inputs = {rand(rand_shape(rng), rng)};
      if (op == "sum") c.f = [](const auto& v) { return ag::sum(v[0]); };
      if (op == "mean") c.f = [](const auto& v) { return ag::mean(v[0]); };
    } else if (op == "conv2d" || op == "conv2d_reflect") {
      const bool reflect = op == "conv2d_reflect";
      const std::size_t k = 1 + rng.uniform_index(4), s = 1 + rng.uniform_index(2);
      const std::size_t pad = reflect ? 1 + rng.uniform_index(2) : rng.uniform_index(3);
      const Shape xs = rand_image_shape(rng, reflect ? pad + 1 : 1);
      if (k > xs[2] + 2 * pad || k > xs[3] + 2 * pad) continue;
      const std::size_t co = 1 + rng.uniform_index(3);
      const bool with_bias = rng.uniform() < 0.7;
      c.inputs = {rand(xs, rng), rand({co, xs[1], k, k}, rng, 0.5)};
      if (with_bias) c.inputs.push_back(rand({co}, rng));
      const auto mode = reflect ? ag::PadMode::kReflect : ag::PadMode::kZero;
      c.f = [s, pad, mode](const auto& v) {
        return ag::conv2d(v[0], v[1], v.size() > 2 ? v[2] : ag::Var(), s, pad, mode);
      };
    } else if (op == "conv_transpose2d") {
      const std::size_t k = 1 + rng.uniform_index(4), s = 1 + rng.uniform_index(2);
      const std::size_t pad = rng.uniform_index(2);
      const Shape xs = rand_image_shape(rng);
      if ((xs[2] - 1) * s + k <= 2 * pad || (xs[3] - 1) * s + k <= 2 * pad) continue;
      const std::size_t co = 1 + rng.uniform_index(3);
      c.inputs = {rand(xs, rng), rand({xs[1], co, k, k}, rng, 0.5), rand({co}, rng)};
      c.f = [s, pad](const auto& v) { return ag::conv_transpose2d(v[0], v[1], v[2], s, pad); };
    } else if (op == "reflect_pad2d") {
      const std::size_t pad = 1 + rng.uniform_index(2);
      c.inputs = {rand(rand_image_shape(rng, pad + 1), rng)};
      c.f = [pad](const auto& v) { return ag::reflect_pad2d(v[0], pad); };
    } else if (op == "instance_norm") {
      const Shape xs = rand_image_shape(rng, 2);
      c.inputs = {rand(xs, rng, 2.0), rand({xs[1]}, rng), rand({xs[1]}, rng)};
      c.f = [](const auto& v) { return ag::instance_norm(v[0], v[1], v[2]); };
    } else if (op == "relu" || op == "leaky_relu" || op == "tanh") {
      c.inputs = {op == "tanh" ? rand(rand_shape(rng), rng) : rand_off_zero(rand_shape(rng), rng)};
      if (op == "relu") c.f = [](const auto& v) { return ag::relu(v[0]); };
      if (op == "leaky_relu") c.f = [](const auto& v) { return ag::leaky_relu(v[0]); };
      if (op == "tanh") c.f = [](const auto& v) { return ag::tanh(v[0]); };
    } else if (op == "max_pool2d") {
      const std::size_t k = 1 + rng.uniform_index(3), s = 1 + rng.uniform_index(2);
      const Shape xs = rand_image_shape(rng, k);
      c.inputs = {distinct_values(xs, rng, 0.01)};
      c.f = [k, s](const auto& v) { return ag::max_pool2d(v[0], k, s); };
    } else if (op == "concat_channels") {
      Shape a = rand_image_shape(rng), b = a;
      b[1] = 1 + rng.uniform_index(3);
      c.inputs = {rand(a, rng), rand(b, rng)};
      c.f = [](const auto& v) { return ag::concat_channels(v[0], v[1]); };
    } else {
      return {};
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace lowlight::testing

#endif  // LOWLIGHT_TESTS_GRADCHECK_HPP_

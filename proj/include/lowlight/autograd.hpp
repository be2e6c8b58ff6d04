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
#ifndef LOWLIGHT_AUTOGRAD_HPP_
#define LOWLIGHT_AUTOGRAD_HPP_

#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "lowlight/tensor.hpp"

// Reverse-mode differentiation over a dynamically built graph. Each op
// returns a Var owning a Node that references its inputs; graphs are freed
// when the last Var referencing them goes away.
namespace lowlight::ag {

struct Node {
  std::string_view op;
  Tensor value;
  // Same shape as value once backward has reached this node; empty before.
  Tensor grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  // Reads self.grad and accumulates into the inputs' grads.
  std::function<void(Node& self)> backward_fn;
};

class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  const Tensor& value() const { return node_->value; }
  // Parameters are updated in place by the optimizer.
  Tensor& mutable_value() { return node_->value; }
  const Tensor& grad() const { return node_->grad; }
  Tensor& mutable_grad() { return node_->grad; }
  const Shape& shape() const { return node_->value.shape(); }
  bool requires_grad() const { return node_->requires_grad; }
  double item() const;

  const std::shared_ptr<Node>& node() const { return node_; }
  explicit operator bool() const { return static_cast<bool>(node_); }

 private:
  std::shared_ptr<Node> node_;
};

Var parameter(Tensor value);
Var constant(Tensor value);
// New constant leaf holding a copy of v's value.
Var detach(const Var& v);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double s);
Var sum(const Var& a);
Var mean(const Var& a);

enum class PadMode { kZero, kReflect };
enum class Activation { kNone, kRelu, kLeakyRelu, kTanh };

inline constexpr double kLeakySlope = 0.2;
inline constexpr double kInstanceNormEps = 1e-5;

// bias may be a null Var.
Var conv2d(const Var& x, const Var& k, const Var& bias, std::size_t stride,
           std::size_t pad, PadMode mode = PadMode::kZero);
Var conv_transpose2d(const Var& x, const Var& k, const Var& bias,
                     std::size_t stride, std::size_t pad);
Var reflect_pad2d(const Var& x, std::size_t pad);
Var instance_norm(const Var& x, const Var& gamma, const Var& beta,
                  double eps = kInstanceNormEps);
Var relu(const Var& x);
Var leaky_relu(const Var& x, double slope = kLeakySlope);
Var tanh(const Var& x);
Var activation(const Var& x, Activation kind);
// Gradient routes to the first maximum in row-major window order.
Var max_pool2d(const Var& x, std::size_t k, std::size_t stride);
Var concat_channels(const Var& a, const Var& b);

Var l1_loss(const Var& a, const Var& b);
Var mse_loss(const Var& a, const Var& b);

// Populates grad on every node reachable from `loss` that requires grad.
// Grads of reachable nodes are reset first, so repeated calls do not
// accumulate. Error(kInvalidInput) unless loss has exactly one element.
void backward(const Var& loss);

// Runs backward and returns d loss / d p for each p; zeros for parameters the
// loss does not reach.
std::vector<Tensor> gradients(const Var& loss, std::span<const Var> params);

void zero_grad(std::span<Var> params);

}  // namespace lowlight::ag

#endif  // LOWLIGHT_AUTOGRAD_HPP_

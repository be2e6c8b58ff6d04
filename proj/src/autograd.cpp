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
#include "lowlight/autograd.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

#include "lowlight/conv.hpp"
#include "lowlight/error.hpp"

namespace lowlight::ag {
namespace {

using NodePtr = std::shared_ptr<Node>;

Var make_node(std::string_view op, Tensor value, std::vector<NodePtr> inputs,
              std::function<void(Node&)> backward_fn) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->value = std::move(value);
  for (const auto& in : inputs) {
    if (in && in->requires_grad) node->requires_grad = true;
  }
  node->inputs = std::move(inputs);
  if (node->requires_grad) node->backward_fn = std::move(backward_fn);
  return Var(std::move(node));
}

void accumulate(Node& n, const Tensor& g) {
  if (!n.requires_grad) return;
  if (n.grad.empty()) {
    n.grad = g;
    return;
  }
  auto dst = n.grad.data();
  const auto src = g.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void accumulate(const NodePtr& n, const Tensor& g) {
  if (n) accumulate(*n, g);
}

Tensor map(const Tensor& t, auto&& f) {
  Tensor out(t.shape());
  const auto src = t.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = f(src[i]);
  return out;
}

Tensor zip(const Tensor& a, const Tensor& b, auto&& f) {
  Tensor out(a.shape());
  const auto x = a.data();
  const auto y = b.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < x.size(); ++i) dst[i] = f(x[i], y[i]);
  return out;
}

void require_node(const Var& v, const char* op) {
  if (!v) fail(ErrorKind::kInvalidInput, std::string(op) + ": null input");
}

}  // namespace

double Var::item() const {
  if (value().numel() != 1) {
    fail(ErrorKind::kInvalidInput, "item() on non-scalar " +
                                       shape_string(value().shape()));
  }
  return value()[0];
}

Var parameter(Tensor value) {
  auto node = std::make_shared<Node>();
  node->op = "parameter";
  node->value = std::move(value);
  node->requires_grad = true;
  return Var(std::move(node));
}

Var constant(Tensor value) {
  auto node = std::make_shared<Node>();
  node->op = "constant";
  node->value = std::move(value);
  return Var(std::move(node));
}

Var detach(const Var& v) { return constant(v.value()); }

Var add(const Var& a, const Var& b) {
  require_same_shape(a.value(), b.value(), "add");
  return make_node("add", zip(a.value(), b.value(), std::plus<>{}),
                   {a.node(), b.node()}, [](Node& self) {
                     accumulate(self.inputs[0], self.grad);
                     accumulate(self.inputs[1], self.grad);
                   });
}

Var sub(const Var& a, const Var& b) {
  require_same_shape(a.value(), b.value(), "sub");
  return make_node("sub", zip(a.value(), b.value(), std::minus<>{}),
                   {a.node(), b.node()}, [](Node& self) {
                     accumulate(self.inputs[0], self.grad);
                     accumulate(self.inputs[1],
                                map(self.grad, [](double g) { return -g; }));
                   });
}

Var mul(const Var& a, const Var& b) {
  require_same_shape(a.value(), b.value(), "mul");
  return make_node("mul", zip(a.value(), b.value(), std::multiplies<>{}),
                   {a.node(), b.node()}, [](Node& self) {
                     const Tensor& x = self.inputs[0]->value;
                     const Tensor& y = self.inputs[1]->value;
                     accumulate(self.inputs[0], zip(self.grad, y, std::multiplies<>{}));
                     accumulate(self.inputs[1], zip(self.grad, x, std::multiplies<>{}));
                   });
}

Var scale(const Var& a, double s) {
  return make_node("scale", map(a.value(), [s](double v) { return v * s; }),
                   {a.node()}, [s](Node& self) {
                     accumulate(self.inputs[0],
                                map(self.grad, [s](double g) { return g * s; }));
                   });
}

Var sum(const Var& a) {
  double total = 0.0;
  for (double v : a.value().data()) total += v;
  return make_node("sum", Tensor::scalar(total), {a.node()}, [](Node& self) {
    const Tensor& x = self.inputs[0]->value;
    accumulate(self.inputs[0], Tensor(x.shape(), self.grad[0]));
  });
}

Var mean(const Var& a) {
  const double n = static_cast<double>(a.value().numel());
  double total = 0.0;
  for (double v : a.value().data()) total += v;
  return make_node("mean", Tensor::scalar(total / n), {a.node()},
                   [n](Node& self) {
                     const Tensor& x = self.inputs[0]->value;
                     accumulate(self.inputs[0], Tensor(x.shape(), self.grad[0] / n));
                   });
}

Var conv2d(const Var& x, const Var& k, const Var& bias, std::size_t stride,
           std::size_t pad, PadMode mode) {
  require_node(x, "conv2d");
  require_node(k, "conv2d");
  if (mode == PadMode::kReflect && pad > 0) {
    return conv2d(reflect_pad2d(x, pad), k, bias, stride, 0, PadMode::kZero);
  }
  const Tensor* b = bias ? &bias.value() : nullptr;
  Tensor out = conv::conv2d(x.value(), k.value(), b, stride, pad);
  return make_node("conv2d", std::move(out), {x.node(), k.node(), bias.node()},
                   [stride, pad](Node& self) {
                     const NodePtr& xn = self.inputs[0];
                     const NodePtr& kn = self.inputs[1];
                     const NodePtr& bn = self.inputs[2];
                     if (xn->requires_grad) {
                       accumulate(*xn, conv::conv2d_grad_input(
                                           self.grad, kn->value,
                                           xn->value.shape(), stride, pad));
                     }
                     if (kn->requires_grad) {
                       accumulate(*kn, conv::conv2d_grad_weight(
                                           xn->value, self.grad,
                                           kn->value.shape(), stride, pad));
                     }
                     if (bn && bn->requires_grad) {
                       accumulate(*bn, conv::conv2d_grad_bias(self.grad));
                     }
                   });
}

Var conv_transpose2d(const Var& x, const Var& k, const Var& bias,
                     std::size_t stride, std::size_t pad) {
  require_node(x, "conv_transpose2d");
  require_node(k, "conv_transpose2d");
  const Tensor* b = bias ? &bias.value() : nullptr;
  Tensor out = conv::conv_transpose2d(x.value(), k.value(), b, stride, pad);
  return make_node(
      "conv_transpose2d", std::move(out), {x.node(), k.node(), bias.node()},
      [stride, pad](Node& self) {
        const NodePtr& xn = self.inputs[0];
        const NodePtr& kn = self.inputs[1];
        const NodePtr& bn = self.inputs[2];
        // out = A^T x where A is conv2d with kernel k, so the input gradient
        // is A g and the kernel gradient swaps the roles of x and g.
        if (xn->requires_grad) {
          accumulate(*xn, conv::conv2d(self.grad, kn->value, nullptr, stride, pad));
        }
        if (kn->requires_grad) {
          accumulate(*kn, conv::conv2d_grad_weight(self.grad, xn->value,
                                                   kn->value.shape(), stride, pad));
        }
        if (bn && bn->requires_grad) {
          accumulate(*bn, conv::conv2d_grad_bias(self.grad));
        }
      });
}

Var reflect_pad2d(const Var& x, std::size_t pad) {
  require_node(x, "reflect_pad2d");
  return make_node("reflect_pad2d", conv::reflect_pad2d(x.value(), pad),
                   {x.node()}, [pad](Node& self) {
                     const NodePtr& xn = self.inputs[0];
                     accumulate(*xn, conv::reflect_pad2d_grad(
                                         self.grad, xn->value.shape(), pad));
                   });
}

Var instance_norm(const Var& x, const Var& gamma, const Var& beta, double eps) {
  require_node(x, "instance_norm");
  require_rank4(x.value(), "instance_norm");
  const Shape& s = x.shape();
  const std::size_t batch = s[0], channels = s[1], plane = s[2] * s[3];
  if (gamma.value().numel() != channels || beta.value().numel() != channels) {
    fail(ErrorKind::kInvalidShape, "instance_norm: gamma/beta must have " +
                                       std::to_string(channels) + " entries");
  }
  const double m = static_cast<double>(plane);
  Tensor xhat(s);
  std::vector<double> inv_std(batch * channels);
  Tensor out(s);
  const auto xs = x.value().data();
  for (std::size_t nc = 0; nc < batch * channels; ++nc) {
    const std::size_t c = nc % channels;
    const double* p = &xs[nc * plane];
    double total = 0.0;
    for (std::size_t i = 0; i < plane; ++i) total += p[i];
    const double mu = total / m;
    double sq = 0.0;
    for (std::size_t i = 0; i < plane; ++i) sq += (p[i] - mu) * (p[i] - mu);
    const double inv = 1.0 / std::sqrt(sq / m + eps);
    inv_std[nc] = inv;
    for (std::size_t i = 0; i < plane; ++i) {
      const double h = (p[i] - mu) * inv;
      xhat[nc * plane + i] = h;
      out[nc * plane + i] = h * gamma.value()[c] + beta.value()[c];
    }
  }
  return make_node(
      "instance_norm", std::move(out), {x.node(), gamma.node(), beta.node()},
      [xhat = std::move(xhat), inv_std = std::move(inv_std), channels, plane,
       m](Node& self) {
        const NodePtr& xn = self.inputs[0];
        const NodePtr& gn = self.inputs[1];
        const NodePtr& bn = self.inputs[2];
        const Tensor& gamma_v = gn->value;
        Tensor dx(xn->value.shape());
        Tensor dgamma({channels});
        Tensor dbeta({channels});
        const std::size_t planes = inv_std.size();
        for (std::size_t nc = 0; nc < planes; ++nc) {
          const std::size_t c = nc % channels;
          const double* g = &self.grad.data()[nc * plane];
          const double* h = &xhat.data()[nc * plane];
          double sum_dh = 0.0, sum_dh_h = 0.0, sum_g = 0.0, sum_g_h = 0.0;
          for (std::size_t i = 0; i < plane; ++i) {
            const double dh = g[i] * gamma_v[c];
            sum_dh += dh;
            sum_dh_h += dh * h[i];
            sum_g += g[i];
            sum_g_h += g[i] * h[i];
          }
          dgamma[c] += sum_g_h;
          dbeta[c] += sum_g;
          const double k = inv_std[nc] / m;
          for (std::size_t i = 0; i < plane; ++i) {
            const double dh = g[i] * gamma_v[c];
            dx[nc * plane + i] = k * ((m * dh - sum_dh) - h[i] * sum_dh_h);
          }
        }
        accumulate(*xn, dx);
        accumulate(*gn, dgamma);
        accumulate(*bn, dbeta);
      });
}

Var relu(const Var& x) {
  return make_node("relu", map(x.value(), [](double v) { return v > 0 ? v : 0.0; }),
                   {x.node()}, [](Node& self) {
                     accumulate(self.inputs[0],
                                zip(self.grad, self.inputs[0]->value,
                                    [](double g, double v) { return v > 0 ? g : 0.0; }));
                   });
}

Var leaky_relu(const Var& x, double slope) {
  return make_node(
      "leaky_relu",
      map(x.value(), [slope](double v) { return v > 0 ? v : v * slope; }),
      {x.node()}, [slope](Node& self) {
        accumulate(self.inputs[0],
                   zip(self.grad, self.inputs[0]->value, [slope](double g, double v) {
                     return v > 0 ? g : g * slope;
                   }));
      });
}

Var tanh(const Var& x) {
  Tensor y = map(x.value(), [](double v) { return std::tanh(v); });
  return make_node("tanh", std::move(y), {x.node()}, [](Node& self) {
    accumulate(self.inputs[0], zip(self.grad, self.value, [](double g, double t) {
                 return g * (1.0 - t * t);
               }));
  });
}

Var activation(const Var& x, Activation kind) {
  switch (kind) {
    case Activation::kNone: return x;
    case Activation::kRelu: return relu(x);
    case Activation::kLeakyRelu: return leaky_relu(x);
    case Activation::kTanh: return tanh(x);
  }
  return x;
}

Var max_pool2d(const Var& x, std::size_t k, std::size_t stride) {
  require_node(x, "max_pool2d");
  require_rank4(x.value(), "max_pool2d");
  const Shape& s = x.shape();
  const std::size_t ho = conv::out_extent(s[2], k, stride, 0);
  const std::size_t wo = conv::out_extent(s[3], k, stride, 0);
  Tensor out({s[0], s[1], ho, wo});
  std::vector<std::size_t> argmax(out.numel());
  const Tensor& xv = x.value();
  std::size_t o = 0;
  for (std::size_t n = 0; n < s[0]; ++n)
    for (std::size_t c = 0; c < s[1]; ++c)
      for (std::size_t oy = 0; oy < ho; ++oy)
        for (std::size_t ox = 0; ox < wo; ++ox, ++o) {
          std::size_t best = 0;
          double best_v = 0.0;
          bool first = true;
          for (std::size_t ky = 0; ky < k; ++ky)
            for (std::size_t kx = 0; kx < k; ++kx) {
              const std::size_t iy = oy * stride + ky, ix = ox * stride + kx;
              const std::size_t idx = ((n * s[1] + c) * s[2] + iy) * s[3] + ix;
              if (first || xv[idx] > best_v) {
                best = idx;
                best_v = xv[idx];
                first = false;
              }
            }
          out[o] = best_v;
          argmax[o] = best;
        }
  return make_node("max_pool2d", std::move(out), {x.node()},
                   [argmax = std::move(argmax)](Node& self) {
                     const NodePtr& xn = self.inputs[0];
                     Tensor g(xn->value.shape());
                     for (std::size_t i = 0; i < argmax.size(); ++i) {
                       g[argmax[i]] += self.grad[i];
                     }
                     accumulate(*xn, g);
                   });
}

Var concat_channels(const Var& a, const Var& b) {
  require_rank4(a.value(), "concat_channels");
  require_rank4(b.value(), "concat_channels");
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  if (sa[0] != sb[0] || sa[2] != sb[2] || sa[3] != sb[3]) {
    fail(ErrorKind::kInvalidShape, "concat_channels: " + shape_string(sa) +
                                       " vs " + shape_string(sb));
  }
  const std::size_t plane = sa[2] * sa[3];
  const std::size_t ca = sa[1], cb = sb[1];
  Tensor out({sa[0], ca + cb, sa[2], sa[3]});
  for (std::size_t n = 0; n < sa[0]; ++n) {
    std::copy_n(&a.value().data()[n * ca * plane], ca * plane,
                &out.data()[n * (ca + cb) * plane]);
    std::copy_n(&b.value().data()[n * cb * plane], cb * plane,
                &out.data()[(n * (ca + cb) + ca) * plane]);
  }
  return make_node("concat_channels", std::move(out), {a.node(), b.node()},
                   [ca, cb, plane](Node& self) {
                     const std::size_t batch = self.value.dim(0);
                     Tensor ga(self.inputs[0]->value.shape());
                     Tensor gb(self.inputs[1]->value.shape());
                     for (std::size_t n = 0; n < batch; ++n) {
                       std::copy_n(&self.grad.data()[n * (ca + cb) * plane],
                                   ca * plane, &ga.data()[n * ca * plane]);
                       std::copy_n(&self.grad.data()[(n * (ca + cb) + ca) * plane],
                                   cb * plane, &gb.data()[n * cb * plane]);
                     }
                     accumulate(self.inputs[0], ga);
                     accumulate(self.inputs[1], gb);
                   });
}

Var l1_loss(const Var& a, const Var& b) {
  require_same_shape(a.value(), b.value(), "l1_loss");
  const double n = static_cast<double>(a.value().numel());
  double total = 0.0;
  const auto x = a.value().data();
  const auto y = b.value().data();
  for (std::size_t i = 0; i < x.size(); ++i) total += std::abs(x[i] - y[i]);
  return make_node("l1_loss", Tensor::scalar(total / n), {a.node(), b.node()},
                   [n](Node& self) {
                     const double g = self.grad[0] / n;
                     Tensor d = zip(self.inputs[0]->value, self.inputs[1]->value,
                                    [g](double u, double v) {
                                      return u > v ? g : (u < v ? -g : 0.0);
                                    });
                     accumulate(self.inputs[0], d);
                     accumulate(self.inputs[1], map(d, [](double v) { return -v; }));
                   });
}

Var mse_loss(const Var& a, const Var& b) {
  require_same_shape(a.value(), b.value(), "mse_loss");
  const double n = static_cast<double>(a.value().numel());
  double total = 0.0;
  const auto x = a.value().data();
  const auto y = b.value().data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    total += d * d;
  }
  return make_node("mse_loss", Tensor::scalar(total / n), {a.node(), b.node()},
                   [n](Node& self) {
                     const double g = 2.0 * self.grad[0] / n;
                     Tensor d = zip(self.inputs[0]->value, self.inputs[1]->value,
                                    [g](double u, double v) { return g * (u - v); });
                     accumulate(self.inputs[0], d);
                     accumulate(self.inputs[1], map(d, [](double v) { return -v; }));
                   });
}

namespace {

// Post-order over nodes that require grad; iterative to survive deep graphs.
std::vector<Node*> topo_order(Node* root) {
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(root, 0);
  visited.insert(root);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node* child = node->inputs[next++].get();
      if (child && child->requires_grad && visited.insert(child).second) {
        stack.emplace_back(child, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  return order;
}

}  // namespace

void backward(const Var& loss) {
  require_node(loss, "backward");
  if (loss.value().numel() != 1) {
    fail(ErrorKind::kInvalidInput, "backward: loss must be scalar, got " +
                                       shape_string(loss.shape()));
  }
  if (!loss.requires_grad()) return;
  const std::vector<Node*> order = topo_order(loss.node().get());
  for (Node* n : order) n->grad = Tensor();
  loss.node()->grad = Tensor(loss.shape(), 1.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward_fn && !n->grad.empty()) n->backward_fn(*n);
  }
}

std::vector<Tensor> gradients(const Var& loss, std::span<const Var> params) {
  for (const Var& p : params) p.node()->grad = Tensor();
  backward(loss);
  std::vector<Tensor> out;
  out.reserve(params.size());
  for (const Var& p : params) {
    out.push_back(p.grad().empty() ? Tensor(p.shape()) : p.grad());
  }
  return out;
}

void zero_grad(std::span<Var> params) {
  for (Var& p : params) p.mutable_grad() = Tensor();
}

}  // namespace lowlight::ag

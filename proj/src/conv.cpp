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
#include "lowlight/conv.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include "lowlight/error.hpp"
#include "lowlight/kernels.hpp"

namespace lowlight::conv {
namespace {

using Index = std::ptrdiff_t;

struct Dims {
  std::size_t n, c, h, w;
};

Dims dims_of(const Shape& s) { return {s[0], s[1], s[2], s[3]}; }

// NCHW -> NHWC copy.
std::vector<double> to_nhwc(const Tensor& t) {
  const Dims d = dims_of(t.shape());
  std::vector<double> out(t.numel());
  for (std::size_t n = 0; n < d.n; ++n)
    for (std::size_t c = 0; c < d.c; ++c)
      for (std::size_t y = 0; y < d.h; ++y)
        for (std::size_t x = 0; x < d.w; ++x)
          out[((n * d.h + y) * d.w + x) * d.c + c] = t.at(n, c, y, x);
  return out;
}

Tensor from_nhwc(const std::vector<double>& v, const Shape& shape) {
  Tensor out(shape);
  const Dims d = dims_of(shape);
  for (std::size_t n = 0; n < d.n; ++n)
    for (std::size_t c = 0; c < d.c; ++c)
      for (std::size_t y = 0; y < d.h; ++y)
        for (std::size_t x = 0; x < d.w; ++x)
          out.at(n, c, y, x) = v[((n * d.h + y) * d.w + x) * d.c + c];
  return out;
}

void check_kernel(const Tensor& x, const Tensor& k, std::size_t x_channels_dim,
                  const char* op) {
  require_rank4(x, op);
  require_rank4(k, op);
  if (x.dim(1) != k.dim(x_channels_dim)) {
    fail(ErrorKind::kInvalidShape,
         std::string(op) + ": input has " + std::to_string(x.dim(1)) +
             " channels, kernel " + shape_string(k.shape()));
  }
}

void check_stride(std::size_t stride) {
  if (stride == 0) fail(ErrorKind::kInvalidShape, "stride must be >= 1");
}

}  // namespace

std::size_t out_extent(std::size_t in, std::size_t k, std::size_t stride,
                       std::size_t pad) {
  check_stride(stride);
  if (k == 0 || k > in + 2 * pad) {
    fail(ErrorKind::kInvalidShape,
         "kernel extent " + std::to_string(k) + " exceeds padded input " +
             std::to_string(in + 2 * pad));
  }
  return (in + 2 * pad - k) / stride + 1;
}

std::size_t transpose_out_extent(std::size_t in, std::size_t k,
                                 std::size_t stride, std::size_t pad) {
  check_stride(stride);
  const Index out = static_cast<Index>((in - 1) * stride + k) -
                    static_cast<Index>(2 * pad);
  if (in == 0 || k == 0 || out < 1) {
    fail(ErrorKind::kInvalidShape, "transposed conv output extent not positive");
  }
  return static_cast<std::size_t>(out);
}

Tensor conv2d(const Tensor& x, const Tensor& k, const Tensor* bias,
              std::size_t stride, std::size_t pad) {
  check_kernel(x, k, 1, "conv2d");
  const Dims xd = dims_of(x.shape());
  const std::size_t co_n = k.dim(0), kh = k.dim(2), kw = k.dim(3);
  if (bias && bias->numel() != co_n) {
    fail(ErrorKind::kInvalidShape, "conv2d: bias length mismatch");
  }
  const std::size_t ho = out_extent(xd.h, kh, stride, pad);
  const std::size_t wo = out_extent(xd.w, kw, stride, pad);

  // Kernel as [ci][ky][kx][co] so output channels are contiguous lanes.
  std::vector<double> wt(k.numel());
  for (std::size_t co = 0; co < co_n; ++co)
    for (std::size_t ci = 0; ci < xd.c; ++ci)
      for (std::size_t ky = 0; ky < kh; ++ky)
        for (std::size_t kx = 0; kx < kw; ++kx)
          wt[((ci * kh + ky) * kw + kx) * co_n + co] = k.at(co, ci, ky, kx);

  const auto axpy = kernels::active().axpy;
  Tensor out({xd.n, co_n, ho, wo});
  std::vector<double> acc(co_n);
  for (std::size_t n = 0; n < xd.n; ++n) {
    for (std::size_t oy = 0; oy < ho; ++oy) {
      for (std::size_t ox = 0; ox < wo; ++ox) {
        for (std::size_t co = 0; co < co_n; ++co) {
          acc[co] = bias ? (*bias)[co] : 0.0;
        }
        for (std::size_t ci = 0; ci < xd.c; ++ci) {
          for (std::size_t ky = 0; ky < kh; ++ky) {
            const Index iy = static_cast<Index>(oy * stride + ky) -
                             static_cast<Index>(pad);
            if (iy < 0 || iy >= static_cast<Index>(xd.h)) continue;
            for (std::size_t kx = 0; kx < kw; ++kx) {
              const Index ix = static_cast<Index>(ox * stride + kx) -
                               static_cast<Index>(pad);
              if (ix < 0 || ix >= static_cast<Index>(xd.w)) continue;
              axpy(co_n, x.at(n, ci, iy, ix),
                   &wt[((ci * kh + ky) * kw + kx) * co_n], acc.data());
            }
          }
        }
        for (std::size_t co = 0; co < co_n; ++co) out.at(n, co, oy, ox) = acc[co];
      }
    }
  }
  return out;
}

Tensor conv2d_grad_input(const Tensor& grad_out, const Tensor& k,
                         const Shape& in_shape, std::size_t stride,
                         std::size_t pad) {
  check_kernel(grad_out, k, 0, "conv2d_grad_input");
  if (in_shape.size() != 4 || in_shape[1] != k.dim(1) ||
      in_shape[0] != grad_out.dim(0)) {
    fail(ErrorKind::kInvalidShape, "conv2d_grad_input: input shape mismatch");
  }
  const Dims gd = dims_of(grad_out.shape());
  const Dims xd = dims_of(in_shape);
  const std::size_t ci_n = xd.c, kh = k.dim(2), kw = k.dim(3);
  if (out_extent(xd.h, kh, stride, pad) != gd.h ||
      out_extent(xd.w, kw, stride, pad) != gd.w) {
    fail(ErrorKind::kInvalidShape, "conv2d_grad_input: spatial mismatch");
  }

  // Kernel as [co][ky][kx][ci] so input channels are contiguous lanes.
  std::vector<double> wt(k.numel());
  for (std::size_t co = 0; co < gd.c; ++co)
    for (std::size_t ci = 0; ci < ci_n; ++ci)
      for (std::size_t ky = 0; ky < kh; ++ky)
        for (std::size_t kx = 0; kx < kw; ++kx)
          wt[((co * kh + ky) * kw + kx) * ci_n + ci] = k.at(co, ci, ky, kx);

  const auto axpy = kernels::active().axpy;
  std::vector<double> gi(shape_numel(in_shape), 0.0);
  for (std::size_t n = 0; n < gd.n; ++n) {
    for (std::size_t oy = 0; oy < gd.h; ++oy) {
      for (std::size_t ox = 0; ox < gd.w; ++ox) {
        for (std::size_t co = 0; co < gd.c; ++co) {
          const double g = grad_out.at(n, co, oy, ox);
          for (std::size_t ky = 0; ky < kh; ++ky) {
            const Index iy = static_cast<Index>(oy * stride + ky) -
                             static_cast<Index>(pad);
            if (iy < 0 || iy >= static_cast<Index>(xd.h)) continue;
            for (std::size_t kx = 0; kx < kw; ++kx) {
              const Index ix = static_cast<Index>(ox * stride + kx) -
                               static_cast<Index>(pad);
              if (ix < 0 || ix >= static_cast<Index>(xd.w)) continue;
              axpy(ci_n, g, &wt[((co * kh + ky) * kw + kx) * ci_n],
                   &gi[((n * xd.h + iy) * xd.w + ix) * ci_n]);
            }
          }
        }
      }
    }
  }
  return from_nhwc(gi, in_shape);
}

Tensor conv2d_grad_weight(const Tensor& x, const Tensor& grad_out,
                          const Shape& k_shape, std::size_t stride,
                          std::size_t pad) {
  require_rank4(x, "conv2d_grad_weight");
  require_rank4(grad_out, "conv2d_grad_weight");
  if (k_shape.size() != 4 || k_shape[0] != grad_out.dim(1) ||
      k_shape[1] != x.dim(1) || x.dim(0) != grad_out.dim(0)) {
    fail(ErrorKind::kInvalidShape, "conv2d_grad_weight: shape mismatch");
  }
  const Dims xd = dims_of(x.shape());
  const Dims gd = dims_of(grad_out.shape());
  const std::size_t co_n = gd.c, kh = k_shape[2], kw = k_shape[3];
  if (out_extent(xd.h, kh, stride, pad) != gd.h ||
      out_extent(xd.w, kw, stride, pad) != gd.w) {
    fail(ErrorKind::kInvalidShape, "conv2d_grad_weight: spatial mismatch");
  }

  const std::vector<double> go = to_nhwc(grad_out);
  const auto axpy = kernels::active().axpy;
  // Accumulate as [ky][kx][ci][co].
  std::vector<double> gw(shape_numel(k_shape), 0.0);
  for (std::size_t n = 0; n < xd.n; ++n) {
    for (std::size_t oy = 0; oy < gd.h; ++oy) {
      for (std::size_t ox = 0; ox < gd.w; ++ox) {
        const double* row = &go[((n * gd.h + oy) * gd.w + ox) * co_n];
        for (std::size_t ky = 0; ky < kh; ++ky) {
          const Index iy = static_cast<Index>(oy * stride + ky) -
                           static_cast<Index>(pad);
          if (iy < 0 || iy >= static_cast<Index>(xd.h)) continue;
          for (std::size_t kx = 0; kx < kw; ++kx) {
            const Index ix = static_cast<Index>(ox * stride + kx) -
                             static_cast<Index>(pad);
            if (ix < 0 || ix >= static_cast<Index>(xd.w)) continue;
            for (std::size_t ci = 0; ci < xd.c; ++ci) {
              axpy(co_n, x.at(n, ci, iy, ix), row,
                   &gw[((ky * kw + kx) * xd.c + ci) * co_n]);
            }
          }
        }
      }
    }
  }
  Tensor out(k_shape);
  for (std::size_t co = 0; co < co_n; ++co)
    for (std::size_t ci = 0; ci < xd.c; ++ci)
      for (std::size_t ky = 0; ky < kh; ++ky)
        for (std::size_t kx = 0; kx < kw; ++kx)
          out.at(co, ci, ky, kx) = gw[((ky * kw + kx) * xd.c + ci) * co_n + co];
  return out;
}

Tensor conv2d_grad_bias(const Tensor& grad_out) {
  require_rank4(grad_out, "conv2d_grad_bias");
  const Dims gd = dims_of(grad_out.shape());
  const std::vector<double> go = to_nhwc(grad_out);
  const auto axpy = kernels::active().axpy;
  Tensor out({gd.c});
  for (std::size_t p = 0; p < gd.n * gd.h * gd.w; ++p) {
    axpy(gd.c, 1.0, &go[p * gd.c], out.data().data());
  }
  return out;
}

Tensor conv_transpose2d(const Tensor& x, const Tensor& k, const Tensor* bias,
                        std::size_t stride, std::size_t pad) {
  check_kernel(x, k, 0, "conv_transpose2d");
  const std::size_t co_n = k.dim(1);
  if (bias && bias->numel() != co_n) {
    fail(ErrorKind::kInvalidShape, "conv_transpose2d: bias length mismatch");
  }
  const Shape out_shape{x.dim(0), co_n,
                        transpose_out_extent(x.dim(2), k.dim(2), stride, pad),
                        transpose_out_extent(x.dim(3), k.dim(3), stride, pad)};
  Tensor out = conv2d_grad_input(x, k, out_shape, stride, pad);
  if (bias) {
    const std::size_t plane = out_shape[2] * out_shape[3];
    auto d = out.data();
    for (std::size_t n = 0; n < out_shape[0]; ++n)
      for (std::size_t c = 0; c < co_n; ++c)
        for (std::size_t i = 0; i < plane; ++i)
          d[(n * co_n + c) * plane + i] += (*bias)[c];
  }
  return out;
}

namespace {

std::size_t reflect_index(Index i, std::size_t extent) {
  if (i < 0) i = -i;
  const Index last = static_cast<Index>(extent) - 1;
  if (i > last) i = 2 * last - i;
  return static_cast<std::size_t>(i);
}

void check_reflect(const Shape& s, std::size_t pad) {
  if (s.size() != 4) fail(ErrorKind::kInvalidShape, "reflect_pad2d: rank 4 required");
  if (pad >= s[2] || pad >= s[3]) {
    fail(ErrorKind::kInvalidShape,
         "reflect_pad2d: pad " + std::to_string(pad) +
             " must be smaller than spatial extents " + shape_string(s));
  }
}

}  // namespace

Tensor reflect_pad2d(const Tensor& x, std::size_t pad) {
  check_reflect(x.shape(), pad);
  const Dims d = dims_of(x.shape());
  Tensor out({d.n, d.c, d.h + 2 * pad, d.w + 2 * pad});
  for (std::size_t n = 0; n < d.n; ++n)
    for (std::size_t c = 0; c < d.c; ++c)
      for (std::size_t y = 0; y < d.h + 2 * pad; ++y) {
        const std::size_t sy =
            reflect_index(static_cast<Index>(y) - static_cast<Index>(pad), d.h);
        for (std::size_t xx = 0; xx < d.w + 2 * pad; ++xx) {
          const std::size_t sx = reflect_index(
              static_cast<Index>(xx) - static_cast<Index>(pad), d.w);
          out.at(n, c, y, xx) = x.at(n, c, sy, sx);
        }
      }
  return out;
}

Tensor reflect_pad2d_grad(const Tensor& grad_out, const Shape& in_shape,
                          std::size_t pad) {
  check_reflect(in_shape, pad);
  const Dims d = dims_of(in_shape);
  Tensor gi(in_shape);
  for (std::size_t n = 0; n < d.n; ++n)
    for (std::size_t c = 0; c < d.c; ++c)
      for (std::size_t y = 0; y < d.h + 2 * pad; ++y) {
        const std::size_t sy =
            reflect_index(static_cast<Index>(y) - static_cast<Index>(pad), d.h);
        for (std::size_t xx = 0; xx < d.w + 2 * pad; ++xx) {
          const std::size_t sx = reflect_index(
              static_cast<Index>(xx) - static_cast<Index>(pad), d.w);
          gi.at(n, c, sy, sx) += grad_out.at(n, c, y, xx);
        }
      }
  return gi;
}

}  // namespace lowlight::conv

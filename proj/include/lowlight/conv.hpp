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
#ifndef LOWLIGHT_CONV_HPP_
#define LOWLIGHT_CONV_HPP_

#include <cstddef>

#include "lowlight/tensor.hpp"

// Graph-free convolution kernels. Layouts: x [N,Cin,H,W], k [Cout,Cin,kh,kw],
// bias [Cout]. All inner loops run through kernels::active().axpy with the
// output channel (or input channel) as the lane dimension; each output element
// accumulates in a fixed order, so results do not depend on the active ISA.
namespace lowlight::conv {

// floor((in + 2*pad - k) / stride) + 1; Error(kInvalidShape) if k > in+2*pad.
std::size_t out_extent(std::size_t in, std::size_t k, std::size_t stride,
                       std::size_t pad);
// (in - 1) * stride - 2 * pad + k; Error(kInvalidShape) if not positive.
std::size_t transpose_out_extent(std::size_t in, std::size_t k,
                                 std::size_t stride, std::size_t pad);

Tensor conv2d(const Tensor& x, const Tensor& k, const Tensor* bias,
              std::size_t stride, std::size_t pad);

// Adjoint of conv2d's linear part with respect to x, producing `in_shape`.
Tensor conv2d_grad_input(const Tensor& grad_out, const Tensor& k,
                         const Shape& in_shape, std::size_t stride,
                         std::size_t pad);
Tensor conv2d_grad_weight(const Tensor& x, const Tensor& grad_out,
                          const Shape& k_shape, std::size_t stride,
                          std::size_t pad);
Tensor conv2d_grad_bias(const Tensor& grad_out);

// x [N,Cin,H,W] with k [Cin,Cout,kh,kw] (the same tensor a conv2d mapping
// Cout -> Cin would use); bias [Cout].
Tensor conv_transpose2d(const Tensor& x, const Tensor& k, const Tensor* bias,
                        std::size_t stride, std::size_t pad);

Tensor reflect_pad2d(const Tensor& x, std::size_t pad);
Tensor reflect_pad2d_grad(const Tensor& grad_out, const Shape& in_shape,
                          std::size_t pad);

}  // namespace lowlight::conv

#endif  // LOWLIGHT_CONV_HPP_

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
#include "lowlight/tensor.hpp"

#include <sstream>

#include "lowlight/error.hpp"

namespace lowlight {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

namespace {

void validate_shape(const Shape& shape) {
  if (shape.empty()) fail(ErrorKind::kInvalidShape, "tensor shape is empty");
  for (std::size_t e : shape) {
    if (e == 0) {
      fail(ErrorKind::kInvalidShape,
           "tensor extents must be >= 1: " + shape_string(shape));
    }
  }
}

}  // namespace

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  validate_shape(shape_);
  data_.assign(shape_numel(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  validate_shape(shape_);
  if (data_.size() != shape_numel(shape_)) {
    fail(ErrorKind::kInvalidShape,
         "tensor data length " + std::to_string(data_.size()) +
             " does not match shape " + shape_string(shape_));
  }
}

Tensor Tensor::reshaped(Shape shape) const {
  return Tensor(std::move(shape), data_);
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    fail(ErrorKind::kInvalidShape, std::string(op) + ": shape mismatch " +
                                       shape_string(a.shape()) + " vs " +
                                       shape_string(b.shape()));
  }
}

void require_rank4(const Tensor& t, const char* op) {
  if (t.rank() != 4) {
    fail(ErrorKind::kInvalidShape, std::string(op) + ": expected N,C,H,W, got " +
                                       shape_string(t.shape()));
  }
}

}  // namespace lowlight

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
#include <algorithm>

#include "lowlight/error.hpp"
#include "lowlight/gan/cyclegan.hpp"

namespace lowlight::gan {

std::vector<Tensor> ImagePool::query(const std::vector<Tensor>& fresh) {
  if (capacity_ == 0) return fresh;
  std::vector<Tensor> out;
  out.reserve(fresh.size());
  for (const Tensor& img : fresh) {
    if (stored_.size() < capacity_) {
      stored_.push_back(img);
      out.push_back(img);
      continue;
    }
    if (rng_.uniform() < 0.5) {
      out.push_back(img);
    } else {
      const std::size_t slot = rng_.uniform_index(capacity_);
      out.push_back(std::move(stored_[slot]));
      stored_[slot] = img;
    }
  }
  return out;
}

Tensor ImagePool::query_batch(const Tensor& batch) {
  require_rank4(batch, "ImagePool::query_batch");
  const std::size_t n = batch.dim(0);
  const Shape image_shape{1, batch.dim(1), batch.dim(2), batch.dim(3)};
  const std::size_t per = shape_numel(image_shape);
  std::vector<Tensor> fresh;
  fresh.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(batch.data().begin() + i * per,
                          batch.data().begin() + (i + 1) * per);
    fresh.emplace_back(image_shape, std::move(v));
  }
  const std::vector<Tensor> picked = query(fresh);
  Tensor out(batch.shape());
  for (std::size_t i = 0; i < n; ++i) {
    if (picked[i].shape() != image_shape) {
      fail(ErrorKind::kInvalidShape, "ImagePool: stored image shape changed");
    }
    std::copy(picked[i].data().begin(), picked[i].data().end(),
              out.data().begin() + i * per);
  }
  return out;
}

}  // namespace lowlight::gan

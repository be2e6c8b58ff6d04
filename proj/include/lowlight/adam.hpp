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
#ifndef LOWLIGHT_ADAM_HPP_
#define LOWLIGHT_ADAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "lowlight/autograd.hpp"
#include "lowlight/tensor.hpp"

namespace lowlight {

struct AdamHyper {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. Moments are created lazily to match the
// parameter list passed to the first step.
class AdamState {
 public:
  explicit AdamState(AdamHyper hyper = {}) : hyper_(hyper) {}

  const AdamHyper& hyper() const { return hyper_; }
  void set_lr(double lr) { hyper_.lr = lr; }
  std::int64_t step_count() const { return t_; }
  const std::vector<Tensor>& first_moment() const { return m_; }
  const std::vector<Tensor>& second_moment() const { return v_; }

  // params[i] -= lr * mhat / (sqrt(vhat) + eps). grads[i] must match params[i]
  // in shape; Error(kInvalidShape) otherwise.
  void step(std::span<Tensor* const> params, std::span<const Tensor> grads);

  // Steps each Var with its accumulated grad (empty grad counts as zero).
  void step(std::span<ag::Var> params);

 private:
  AdamHyper hyper_;
  std::int64_t t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

}  // namespace lowlight

#endif  // LOWLIGHT_ADAM_HPP_

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
#ifndef LOWLIGHT_GAN_CYCLEGAN_HPP_
#define LOWLIGHT_GAN_CYCLEGAN_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lowlight/autograd.hpp"
#include "lowlight/gan/network.hpp"
#include "lowlight/rng.hpp"
#include "lowlight/tensor.hpp"

namespace lowlight::gan {

struct TrainConfig {
  std::size_t epochs = 200;
  std::size_t batch_size = 1;
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double lambda_cyc = 10.0;
  double lambda_idt = 0.0;
  std::size_t pool_size = 50;
  std::uint64_t seed = 0;
  std::size_t image_size = 256;
  // Linear lr decay to zero over the final decay_epochs epochs; 0 = constant.
  std::size_t decay_epochs = 0;

  // Error(kInvalidConfig) naming the offending field.
  void validate() const;
  double lr_at_epoch(std::size_t epoch) const;
};

// Unweighted loss components of one evaluation.
struct LossMetrics {
  double adv_ab = 0;   // mse(D_B(G_AB(A)), 1)
  double adv_ba = 0;   // mse(D_A(G_BA(B)), 1)
  double cycle_a = 0;  // l1(G_BA(G_AB(A)), A)
  double cycle_b = 0;  // l1(G_AB(G_BA(B)), B)
  double idt_a = 0;    // l1(G_BA(A), A), only when lambda_idt > 0
  double idt_b = 0;    // l1(G_AB(B), B), only when lambda_idt > 0
};

struct GeneratorObjective {
  ag::Var loss;
  ag::Var fake_a;  // G_BA(B)
  ag::Var fake_b;  // G_AB(A)
  LossMetrics metrics;
};

// Least-squares adversarial terms (target 1) plus lambda_cyc * (cycle_a +
// cycle_b) plus lambda_cyc * lambda_idt * (idt_a + idt_b) when lambda_idt > 0.
GeneratorObjective generator_objective(const Network& g_ab, const Network& g_ba,
                                       const Network& d_a, const Network& d_b,
                                       const ag::Var& real_a,
                                       const ag::Var& real_b,
                                       const TrainConfig& cfg);

// 0.5 * (mse(D(real), 1) + mse(D(fake), 0)).
ag::Var discriminator_objective(const Network& d, const ag::Var& real,
                                const ag::Var& fake);

struct CycleGanLosses {
  ag::Var loss_g;
  ag::Var loss_d_a;
  ag::Var loss_d_b;
  LossMetrics metrics;
};

// Full objective on one pair of batches; discriminator terms use the current
// fakes, detached. Error(kInvalidShape) if the batches differ in C,H,W.
CycleGanLosses cyclegan_losses(const Network& g_ab, const Network& g_ba,
                               const Network& d_a, const Network& d_b,
                               const Tensor& batch_a, const Tensor& batch_b,
                               const TrainConfig& cfg);

// History of generated images for discriminator updates.
//
// Per image, in batch order: while below capacity the image is stored and
// returned (no draws). Once full, one uniform draw u decides: u < 0.5 returns
// the fresh image; otherwise a second draw picks a stored slot uniformly,
// that stored image is returned and the fresh one takes its slot.
class ImagePool {
 public:
  ImagePool(std::size_t capacity, std::uint64_t seed)
      : capacity_(capacity), rng_(seed) {}

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return stored_.size(); }

  std::vector<Tensor> query(const std::vector<Tensor>& fresh);
  // Splits an [N,C,H,W] batch into images, queries, and restacks.
  Tensor query_batch(const Tensor& batch);

 private:
  std::size_t capacity_;
  Rng rng_;
  std::vector<Tensor> stored_;
};

}  // namespace lowlight::gan

#endif  // LOWLIGHT_GAN_CYCLEGAN_HPP_

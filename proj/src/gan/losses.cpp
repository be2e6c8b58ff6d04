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
#include <cmath>

#include "lowlight/error.hpp"
#include "lowlight/gan/cyclegan.hpp"

namespace lowlight::gan {
namespace {

ag::Var target_like(const ag::Var& v, double value) {
  return ag::constant(Tensor(v.shape(), value));
}

void require_finite_nonneg(double v, const char* field) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    fail(ErrorKind::kInvalidConfig, std::string(field) + " must be a finite value >= 0");
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 1) fail(ErrorKind::kInvalidConfig, "batch_size must be >= 1");
  if (image_size < 1) fail(ErrorKind::kInvalidConfig, "image_size must be >= 1");
  require_finite_nonneg(lr, "lr");
  require_finite_nonneg(lambda_cyc, "lambda_cyc");
  require_finite_nonneg(lambda_idt, "lambda_idt");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) fail(ErrorKind::kInvalidConfig, "beta1 must be in [0,1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) fail(ErrorKind::kInvalidConfig, "beta2 must be in [0,1)");
  if (decay_epochs > epochs) {
    fail(ErrorKind::kInvalidConfig, "decay_epochs must be <= epochs");
  }
}

double TrainConfig::lr_at_epoch(std::size_t epoch) const {
  if (decay_epochs == 0) return lr;
  const std::size_t constant_epochs = epochs - decay_epochs;
  if (epoch < constant_epochs) return lr;
  const double k = static_cast<double>(epoch - constant_epochs + 1) /
                   static_cast<double>(decay_epochs + 1);
  return lr * (1.0 - k);
}

GeneratorObjective generator_objective(const Network& g_ab, const Network& g_ba,
                                       const Network& d_a, const Network& d_b,
                                       const ag::Var& real_a,
                                       const ag::Var& real_b,
                                       const TrainConfig& cfg) {
  GeneratorObjective out;
  out.fake_b = g_ab.forward(real_a);
  out.fake_a = g_ba.forward(real_b);
  const ag::Var rec_a = g_ba.forward(out.fake_b);
  const ag::Var rec_b = g_ab.forward(out.fake_a);

  const ag::Var pred_b = d_b.forward(out.fake_b);
  const ag::Var pred_a = d_a.forward(out.fake_a);
  const ag::Var adv_ab = ag::mse_loss(pred_b, target_like(pred_b, 1.0));
  const ag::Var adv_ba = ag::mse_loss(pred_a, target_like(pred_a, 1.0));
  const ag::Var cyc_a = ag::l1_loss(rec_a, real_a);
  const ag::Var cyc_b = ag::l1_loss(rec_b, real_b);

  ag::Var loss = ag::add(ag::add(adv_ab, adv_ba),
                         ag::scale(ag::add(cyc_a, cyc_b), cfg.lambda_cyc));
  out.metrics.adv_ab = adv_ab.item();
  out.metrics.adv_ba = adv_ba.item();
  out.metrics.cycle_a = cyc_a.item();
  out.metrics.cycle_b = cyc_b.item();
  if (cfg.lambda_idt > 0.0) {
    const ag::Var idt_a = ag::l1_loss(g_ba.forward(real_a), real_a);
    const ag::Var idt_b = ag::l1_loss(g_ab.forward(real_b), real_b);
    loss = ag::add(loss, ag::scale(ag::add(idt_a, idt_b),
                                   cfg.lambda_cyc * cfg.lambda_idt));
    out.metrics.idt_a = idt_a.item();
    out.metrics.idt_b = idt_b.item();
  }
  out.loss = loss;
  return out;
}

ag::Var discriminator_objective(const Network& d, const ag::Var& real,
                                const ag::Var& fake) {
  const ag::Var pred_real = d.forward(real);
  const ag::Var pred_fake = d.forward(fake);
  const ag::Var loss_real = ag::mse_loss(pred_real, target_like(pred_real, 1.0));
  const ag::Var loss_fake = ag::mse_loss(pred_fake, target_like(pred_fake, 0.0));
  return ag::scale(ag::add(loss_real, loss_fake), 0.5);
}

CycleGanLosses cyclegan_losses(const Network& g_ab, const Network& g_ba,
                               const Network& d_a, const Network& d_b,
                               const Tensor& batch_a, const Tensor& batch_b,
                               const TrainConfig& cfg) {
  require_rank4(batch_a, "cyclegan_losses");
  require_rank4(batch_b, "cyclegan_losses");
  if (batch_a.dim(1) != batch_b.dim(1) || batch_a.dim(2) != batch_b.dim(2) ||
      batch_a.dim(3) != batch_b.dim(3)) {
    fail(ErrorKind::kInvalidShape, "cyclegan_losses: domain batches differ in image size");
  }
  const ag::Var real_a = ag::constant(batch_a);
  const ag::Var real_b = ag::constant(batch_b);
  GeneratorObjective g = generator_objective(g_ab, g_ba, d_a, d_b, real_a, real_b, cfg);
  CycleGanLosses out;
  out.loss_g = g.loss;
  out.metrics = g.metrics;
  out.loss_d_a = discriminator_objective(d_a, real_a, ag::detach(g.fake_a));
  out.loss_d_b = discriminator_objective(d_b, real_b, ag::detach(g.fake_b));
  return out;
}

}  // namespace lowlight::gan

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
#include "lowlight/gan/train.hpp"

#include <cstdio>
#include <numeric>

#include "lowlight/adam.hpp"
#include "lowlight/error.hpp"

namespace lowlight::gan {
namespace {

std::vector<ag::Var> concat_params(Network& a, Network& b) {
  std::vector<ag::Var> out = a.parameters();
  out.insert(out.end(), b.parameters().begin(), b.parameters().end());
  return out;
}

void check_domain(std::span<const RasterImage> domain, const char* name,
                  std::size_t size) {
  if (domain.empty()) {
    fail(ErrorKind::kInvalidInput, std::string("training domain ") + name + " is empty");
  }
  for (const RasterImage& img : domain) {
    if (img.channels() != 3 || img.width() != size || img.height() != size) {
      fail(ErrorKind::kInvalidInput,
           std::string("domain ") + name + " image is " + std::to_string(img.width()) +
               "x" + std::to_string(img.height()) + "x" +
               std::to_string(img.channels()) + ", expected " + std::to_string(size) +
               "x" + std::to_string(size) + "x3");
    }
  }
}

Tensor gather(const std::vector<Tensor>& images, std::span<const std::size_t> idx) {
  const Shape& one = images.front().shape();
  Tensor out({idx.size(), one[1], one[2], one[3]});
  const std::size_t per = images.front().numel();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::copy(images[idx[i]].data().begin(), images[idx[i]].data().end(),
              out.data().begin() + i * per);
  }
  return out;
}

}  // namespace

std::string_view to_string(GeneratorArch arch) {
  return arch == GeneratorArch::kResnet ? "resnet9" : "unet256";
}

GeneratorArch parse_arch(std::string_view name) {
  if (name == "resnet9" || name == "resnet") return GeneratorArch::kResnet;
  if (name == "unet256" || name == "unet") return GeneratorArch::kUnet;
  fail(ErrorKind::kInvalidConfig, "unknown arch '" + std::string(name) +
                                      "' (expected resnet9 or unet256)");
}

NetworkSpec ArchConfig::generator_spec(std::size_t in_ch) const {
  return arch == GeneratorArch::kResnet ? build_resnet9_generator(in_ch, base, n_blocks)
                                        : build_unet256_generator(in_ch, base, depth);
}

NetworkSpec ArchConfig::discriminator_spec(std::size_t in_ch) const {
  return build_patchgan(in_ch, disc_base, disc_layers);
}

CycleGanModel init_model(const TrainConfig& cfg, const ArchConfig& arch) {
  Rng rng(cfg.seed);
  const NetworkSpec gen = arch.generator_spec();
  const NetworkSpec disc = arch.discriminator_spec();
  Network g_ab(gen, rng);
  Network g_ba(gen, rng);
  Network d_a(disc, rng);
  Network d_b(disc, rng);
  return {std::move(g_ab), std::move(g_ba), std::move(d_a), std::move(d_b)};
}

TrainResult train(const TrainConfig& cfg, const ArchConfig& arch,
                  std::span<const RasterImage> domain_a,
                  std::span<const RasterImage> domain_b,
                  const std::function<void(const MetricRow&)>& on_step) {
  cfg.validate();
  check_domain(domain_a, "A", cfg.image_size);
  check_domain(domain_b, "B", cfg.image_size);
  const Shape probe{1, 3, cfg.image_size, cfg.image_size};
  infer_output_shape(arch.generator_spec(), probe);
  infer_output_shape(arch.discriminator_spec(), probe);

  CycleGanModel m = init_model(cfg, arch);
  // Separate stream for sampling and pools, derived after initialization.
  Rng rng(cfg.seed ^ 0x5eed5eed5eed5eedULL);
  ImagePool pool_a(cfg.pool_size, rng.fork_seed());
  ImagePool pool_b(cfg.pool_size, rng.fork_seed());

  std::vector<Tensor> data_a, data_b;
  for (const RasterImage& img : domain_a) data_a.push_back(normalize_in(img));
  for (const RasterImage& img : domain_b) data_b.push_back(normalize_in(img));

  const AdamHyper hyper{cfg.lr, cfg.beta1, cfg.beta2, 1e-8};
  AdamState opt_g(hyper), opt_da(hyper), opt_db(hyper);
  std::vector<ag::Var> gen_params = concat_params(m.g_ab, m.g_ba);

  const std::size_t batch = cfg.batch_size;
  const std::size_t steps_per_epoch = std::max<std::size_t>(1, data_a.size() / batch);
  TrainResult result;
  std::vector<std::size_t> perm(data_a.size());
  std::vector<std::size_t> idx_a(batch), idx_b(batch);
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cfg.lr_at_epoch(epoch);
    opt_g.set_lr(lr);
    opt_da.set_lr(lr);
    opt_db.set_lr(lr);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
    }
    for (std::size_t s = 0; s < steps_per_epoch; ++s) {
      for (std::size_t j = 0; j < batch; ++j) {
        idx_a[j] = perm[(s * batch + j) % perm.size()];
      }
      for (std::size_t j = 0; j < batch; ++j) idx_b[j] = rng.uniform_index(data_b.size());
      const ag::Var real_a = ag::constant(gather(data_a, idx_a));
      const ag::Var real_b = ag::constant(gather(data_b, idx_b));

      m.d_a.set_trainable(false);
      m.d_b.set_trainable(false);
      const GeneratorObjective g =
          generator_objective(m.g_ab, m.g_ba, m.d_a, m.d_b, real_a, real_b, cfg);
      ag::zero_grad(gen_params);
      ag::backward(g.loss);
      opt_g.step(gen_params);
      m.d_a.set_trainable(true);
      m.d_b.set_trainable(true);

      const ag::Var fake_a = ag::constant(pool_a.query_batch(g.fake_a.value()));
      const ag::Var loss_da = discriminator_objective(m.d_a, real_a, fake_a);
      ag::zero_grad(m.d_a.parameters());
      ag::backward(loss_da);
      opt_da.step(m.d_a.parameters());

      const ag::Var fake_b = ag::constant(pool_b.query_batch(g.fake_b.value()));
      const ag::Var loss_db = discriminator_objective(m.d_b, real_b, fake_b);
      ag::zero_grad(m.d_b.parameters());
      ag::backward(loss_db);
      opt_db.step(m.d_b.parameters());

      MetricRow row{++step,
                    g.loss.item(),
                    loss_da.item(),
                    loss_db.item(),
                    g.metrics.cycle_a + g.metrics.cycle_b,
                    g.metrics.idt_a + g.metrics.idt_b};
      result.log.push_back(row);
      if (on_step) on_step(row);
    }
  }
  result.g_ab = m.g_ab.export_weights();
  result.g_ba = m.g_ba.export_weights();
  result.d_a = m.d_a.export_weights();
  result.d_b = m.d_b.export_weights();
  return result;
}

std::string metrics_csv(std::span<const MetricRow> rows) {
  std::string out = "step,loss_G,loss_D_A,loss_D_B,cycle,idt\n";
  char buf[256];
  for (const MetricRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.step,
                  r.loss_g, r.loss_d_a, r.loss_d_b, r.cycle, r.idt);
    out += buf;
  }
  return out;
}

}  // namespace lowlight::gan

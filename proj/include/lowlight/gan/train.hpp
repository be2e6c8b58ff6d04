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
#ifndef LOWLIGHT_GAN_TRAIN_HPP_
#define LOWLIGHT_GAN_TRAIN_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lowlight/gan/cyclegan.hpp"
#include "lowlight/gan/network.hpp"
#include "lowlight/gan/weights.hpp"
#include "lowlight/pixelops.hpp"

namespace lowlight::gan {

enum class GeneratorArch { kResnet, kUnet };

std::string_view to_string(GeneratorArch arch);
// "resnet9" / "resnet" and "unet256" / "unet"; Error(kInvalidConfig) otherwise.
GeneratorArch parse_arch(std::string_view name);

struct ArchConfig {
  GeneratorArch arch = GeneratorArch::kResnet;
  std::size_t base = 8;
  std::size_t n_blocks = 2;  // resnet only
  std::size_t depth = 2;     // unet only
  std::size_t disc_base = 8;
  std::size_t disc_layers = 2;

  NetworkSpec generator_spec(std::size_t in_ch = 3) const;
  NetworkSpec discriminator_spec(std::size_t in_ch = 3) const;
};

struct CycleGanModel {
  Network g_ab;
  Network g_ba;
  Network d_a;
  Network d_b;
};

// Networks initialized from cfg.seed, in the order G_AB, G_BA, D_A, D_B.
CycleGanModel init_model(const TrainConfig& cfg, const ArchConfig& arch);

struct MetricRow {
  std::size_t step;  // 1-based
  double loss_g;
  double loss_d_a;
  double loss_d_b;
  double cycle;  // cycle_a + cycle_b, unweighted
  double idt;    // idt_a + idt_b, unweighted (0 when the term is off)
};

struct TrainResult {
  WeightStore g_ab;
  WeightStore g_ba;
  WeightStore d_a;
  WeightStore d_b;
  std::vector<MetricRow> log;
};

// Steps per epoch: max(1, |A| / batch_size). Each epoch shuffles A; B
// batches are drawn uniformly with replacement. Per step the generators are
// updated first (discriminators frozen), then D_A and D_B on real images and
// pooled fakes. Deterministic for a given seed.
//
// Error(kInvalidInput) if either domain is empty or an image is not
// image_size x image_size RGB.
TrainResult train(const TrainConfig& cfg, const ArchConfig& arch,
                  std::span<const RasterImage> domain_a,
                  std::span<const RasterImage> domain_b,
                  const std::function<void(const MetricRow&)>& on_step = {});

// `step,loss_G,loss_D_A,loss_D_B,cycle,idt` with %.17g values.
std::string metrics_csv(std::span<const MetricRow> rows);

}  // namespace lowlight::gan

#endif  // LOWLIGHT_GAN_TRAIN_HPP_

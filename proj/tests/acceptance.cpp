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
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "eval_oracle.hpp"
#include "gradcheck.hpp"
#include "lowlight/autograd.hpp"
#include "lowlight/cli.hpp"
#include "lowlight/datasets.hpp"
#include "lowlight/kernels.hpp"
#include "lowlight/gan/network.hpp"
#include "lowlight/gan/train.hpp"
#include "lowlight/pixelops.hpp"
#include "lowlight/toy.hpp"
#include "test_util.hpp"

using namespace lowlight;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Runs `f`, adds the wall-time bound to its verdict and prints one line.
bool criterion(const std::string& name, double limit_s, const std::function<Outcome()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = o.pass && secs < limit_s;
  std::printf("%s  %-22s %s [%.2fs < %.0fs]\n", pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.c_str(), secs, limit_s);
  std::fflush(stdout);
  return pass;
}

Outcome he_goldens() {
  const RasterImage ch(4, 1, 1, {10, 10, 20, 30});
  const RasterImage eq = equalize_channel(ch);
  const std::vector<std::uint8_t> want{0, 0, 128, 255};
  const bool golden = std::equal(want.begin(), want.end(), eq.data().begin());

  Rng rng(20260101);
  const std::size_t n = 1000000;
  std::vector<std::uint8_t> px(n * 3);
  for (auto& v : px) v = static_cast<std::uint8_t>(rng.uniform_index(256));
  const RasterImage img(1000, 1000, 3, std::move(px));
  const RasterImage back = yuv_to_rgb(rgb_to_yuv(img));
  int worst = 0;
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    worst = std::max(worst, std::abs(int(img.data()[i]) - int(back.data()[i])));
  }
  return {golden && worst <= 1,
          format("golden %s, round trip max error %d over %zu px", golden ? "ok" : "MISMATCH",
                 worst, n)};
}

Outcome gradient_suite() {
  std::uint64_t seed = 100;
  double worst = 0;
  std::string worst_op;
  std::size_t cases = 0;
  bool ok = true;
  const auto ops = testing::gradcheck_primitives();
  for (const std::string& op : ops) {
    const auto batch = testing::gradcheck_cases(op, 20, seed++);
    ok = ok && batch.size() >= 20;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto r = testing::check_gradients(batch[i], 1000 + i);
      ok = ok && r.checked > 0;
      ++cases;
      if (r.max_rel > worst) {
        worst = r.max_rel;
        worst_op = op;
      }
    }
  }
  return {ok && worst < 1e-4, format("%zu primitives, %zu cases, max rel error %.2e (%s)",
                                     ops.size(), cases, worst, worst_op.c_str())};
}

Shape forward_shape(const gan::NetworkSpec& spec, const Shape& in) {
  Rng rng(1);
  gan::Network net(spec, rng);
  Rng data(2);
  return net.forward(ag::constant(testing::random_tensor(in, data))).shape();
}

Outcome network_shapes() {
  using namespace gan;
  const Shape in{1, 3, 256, 256};
  const Shape img{1, 3, 256, 256}, patch{1, 1, 30, 30};
  bool ok = infer_output_shape(build_resnet9_generator(3, 64, 9), in) == img &&
            infer_output_shape(build_unet256_generator(3, 64, 8), in) == img &&
            infer_output_shape(build_patchgan(3, 64, 3), in) == patch;
  ok = ok && forward_shape(build_resnet9_generator(3, 2, 9), in) == img &&
       forward_shape(build_unet256_generator(3, 2, 8), in) == img &&
       forward_shape(build_patchgan(3, 2, 3), in) == patch;
  bool rejects = false;
  try {
    infer_output_shape(build_unet256_generator(3, 64, 8), {1, 3, 200, 200});
  } catch (const Error& e) {
    rejects = e.kind() == ErrorKind::kInvalidConfig;
  }
  return {ok && rejects, format("resnet9 256->256, unet256 256->256, patchgan 1x30x30, "
                                "unet rejects 200: %s",
                                rejects ? "yes" : "no")};
}

Outcome evaluator_oracle() {
  double worst = 0;
  for (const auto& cfg : {eval::EvalConfig::voc50(), eval::EvalConfig::coco()}) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      worst = std::max(worst, testing::evaluator_discrepancy(testing::random_scene(seed), cfg));
    }
  }
  return {worst <= 1e-9, format("50 scenes x {voc50, coco}, max |AP - reference| %.1e", worst)};
}

Outcome hand_cases() {
  using namespace eval;
  const std::vector<PrPoint> full{{1, 1}, {0.5, 1}};
  const std::vector<PrPoint> half{{1, 0.5}};
  const double ap1 = average_precision(full, Interpolation::kVocAllPoint);
  const double ap2 = average_precision(half, Interpolation::kVocAllPoint);
  const double i = iou({0, 0, 10, 10}, {5, 5, 10, 10});
  const bool ok = ap1 == 1.0 && ap2 == 0.5 && std::abs(i - 1.0 / 7.0) <= 1e-12;
  return {ok, format("AP %.17g, AP %.17g, IoU - 1/7 = %.1e", ap1, ap2, i - 1.0 / 7.0)};
}

struct ToyRun {
  toy::ToyDomains data;
  gan::ArchConfig arch;
  gan::TrainResult result;
};

ToyRun train_toy(gan::GeneratorArch kind) {
  ToyRun run;
  run.data = toy::make_domains(32, 16, 7);
  gan::TrainConfig cfg;
  cfg.epochs = 25;
  cfg.batch_size = 4;
  cfg.lr = 2e-3;
  cfg.lambda_cyc = 10;
  cfg.image_size = 16;
  cfg.seed = 7;
  run.arch.arch = kind;
  run.arch.base = 8;
  run.arch.n_blocks = 2;
  run.arch.depth = 2;
  run.arch.disc_base = 8;
  run.arch.disc_layers = 2;
  run.result = gan::train(cfg, run.arch, run.data.a, run.data.b);
  return run;
}

Outcome toy_checks(const ToyRun& run) {
  const auto& log = run.result.log;
  if (log.size() != 200) return {false, format("expected 200 steps, got %zu", log.size())};
  double first = 0, last = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    first += log[i].loss_g / 5;
    last += log[log.size() - 1 - i].loss_g / 5;
  }
  const auto spec = run.arch.generator_spec();
  const gan::Network g_ab(spec, run.result.g_ab), g_ba(spec, run.result.g_ba);
  double luma_before = 0, luma_after = 0, cyc_a = 0, cyc_b = 0;
  const double n = double(run.data.a.size());
  for (std::size_t i = 0; i < run.data.a.size(); ++i) {
    luma_before += toy::mean_luma(run.data.a[i]) / n;
    luma_after += toy::mean_luma(gan::translate(g_ab, run.data.a[i])) / n;
    const auto x = ag::constant(gan::normalize_in(run.data.a[i]));
    cyc_a += ag::l1_loss(g_ba.forward(g_ab.forward(x)), x).item() / n;
    const auto y = ag::constant(gan::normalize_in(run.data.b[i]));
    cyc_b += ag::l1_loss(g_ab.forward(g_ba.forward(y)), y).item() / n;
  }
  const bool drop = last <= 0.5 * first;
  const bool bright = luma_after - luma_before >= 0.2;
  const bool cycle = cyc_a < 0.15 && cyc_b < 0.15;
  return {drop && bright && cycle,
          format("loss_G %.3f->%.3f (x%.2f), luma +%.3f, cycle %.3f/%.3f",
                 first, last, last / first, luma_after - luma_before, cyc_a, cyc_b)};
}

ToyRun resnet_run;

Outcome toy_cyclegan() {
  resnet_run = train_toy(gan::GeneratorArch::kResnet);
  const Outcome r = toy_checks(resnet_run);
  const Outcome u = toy_checks(train_toy(gan::GeneratorArch::kUnet));
  return {r.pass && u.pass, "resnet " + r.detail + "; unet " + u.detail};
}

std::vector<std::uint8_t> bytes(const fs::path& p) { return data::read_bytes(p); }

Outcome determinism() {
  const fs::path dir = testing::scratch_dir("acceptance_det");
  const auto d = toy::make_domains(8, 16, 3);
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  for (std::size_t i = 0; i < d.a.size(); ++i) {
    data::write_ppm_file(dir / "a" / (toy::image_id(i) + ".ppm"), d.a[i]);
    data::write_ppm_file(dir / "b" / (toy::image_id(i) + ".ppm"), d.b[i]);
  }
  data::write_text(dir / "toy.cfg",
                   "arch = resnet9\nbase = 4\nn_blocks = 1\ndisc_base = 4\ndisc_layers = 2\n"
                   "epochs = 3\nbatch_size = 2\nlr = 0.002\nseed = 5\nimage_size = 16\n");
  const testing::Scene scene = testing::random_scene(17);
  fs::create_directories(dir / "gt");
  const auto& table = data::ClassTable::exdark();
  for (std::size_t i = 0; i < 20; ++i) {
    const std::string id = "img" + std::to_string(i);
    std::string text;
    for (const auto& g : scene.gts) {
      if (g.image_id != id) continue;
      text += format("%s %.17g %.17g %.17g %.17g\n", table.name(g.class_id).c_str(), g.box.left,
                     g.box.top, g.box.width, g.box.height);
    }
    data::write_text(dir / "gt" / (id + ".txt"), text);
  }
  std::string json = "[";
  for (const auto& det : scene.dets) {
    json += format("%s{\"image_id\":\"%s\",\"class_name\":\"%s\",\"bbox\":[%.17g,%.17g,%.17g,%.17g],"
                   "\"score\":%.17g}",
                   json.size() > 1 ? "," : "", det.image_id.c_str(),
                   table.name(det.class_id).c_str(), det.box.left, det.box.top, det.box.width,
                   det.box.height, det.score);
  }
  data::write_text(dir / "dets.json", json + "]");

  std::ostringstream sink;
  for (const char* rep : {"r1", "r2"}) {
    cli::cmd_train({dir / "toy.cfg", dir / "a", dir / "b", dir / rep / "g.llws", {}}, sink, sink);
    for (const char* protocol : {"voc50", "coco"}) {
      cli::EvalOptions ev;
      ev.gt_dir = dir / "gt";
      ev.detections = dir / "dets.json";
      ev.protocol = protocol;
      ev.out = dir / rep / (std::string(protocol) + ".json");
      ev.pr_csv = dir / rep / (std::string(protocol) + ".csv");
      cli::cmd_eval(ev, sink, sink);
    }
  }
  std::size_t compared = 0, differing = 0;
  for (const char* f : {"g.llws", "g.llws.g_ba", "g.llws.d_a", "g.llws.d_b", "g.llws.metrics.csv",
                        "voc50.json", "voc50.csv", "coco.json", "coco.csv"}) {
    ++compared;
    if (bytes(dir / "r1" / f) != bytes(dir / "r2" / f)) ++differing;
  }
  fs::remove_all(dir);
  return {differing == 0,
          format("train + eval rerun: %zu of %zu output files differ", differing, compared)};
}

double toy_map(const std::vector<RasterImage>& imgs, const std::vector<eval::GroundTruth>& gts) {
  std::vector<eval::Detection> dets;
  for (std::size_t i = 0; i < imgs.size(); ++i) {
    for (auto& d : toy::detect(imgs[i], toy::image_id(i))) dets.push_back(std::move(d));
  }
  return eval::evaluate(dets, gts, eval::EvalConfig::voc50()).map;
}

Outcome toy_map_gain() {
  if (resnet_run.result.log.empty()) resnet_run = train_toy(gan::GeneratorArch::kResnet);
  const auto held_out = toy::make_domains(16, 16, 1007);
  const gan::Network g_ab(resnet_run.arch.generator_spec(), resnet_run.result.g_ab);
  std::vector<RasterImage> translated;
  std::vector<eval::GroundTruth> gts;
  for (std::size_t i = 0; i < held_out.a.size(); ++i) {
    translated.push_back(gan::translate(g_ab, held_out.a[i]));
    gts.insert(gts.end(), held_out.a_boxes[i].begin(), held_out.a_boxes[i].end());
  }
  const double dark = toy_map(held_out.a, gts);
  const double lit = toy_map(translated, gts);
  return {lit >= dark, format("mAP@0.5 dark %.4f, translated %.4f", dark, lit)};
}

}  // namespace

int main() {
  std::printf("lowlight acceptance, kernel ISA: %s\n", std::string(kernels::to_string(kernels::active().isa)).c_str());
  bool all = true;
  all &= criterion("he-goldens", 10, he_goldens);
  all &= criterion("gradient-suite", 120, gradient_suite);
  all &= criterion("network-shapes", 300, network_shapes);
  all &= criterion("evaluator-oracle", 30, evaluator_oracle);
  all &= criterion("hand-cases", 1, hand_cases);
  all &= criterion("toy-cyclegan", 300, toy_cyclegan);
  all &= criterion("determinism", 300, determinism);
  all &= criterion("toy-map", 60, toy_map_gain);
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}

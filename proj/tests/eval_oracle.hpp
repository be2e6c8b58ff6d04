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
#ifndef LOWLIGHT_TESTS_EVAL_ORACLE_HPP_
#define LOWLIGHT_TESTS_EVAL_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "lowlight/evalmap.hpp"
#include "lowlight/rng.hpp"

// Slow reference evaluator written straight from the protocol definitions,
// plus a generator of random scenes to compare against.
namespace lowlight::testing {

struct Scene {
  std::vector<eval::Detection> dets;
  std::vector<eval::GroundTruth> gts;
};

inline eval::BoundingBox random_box(Rng& rng) {
  return {std::floor(rng.uniform() * 80), std::floor(rng.uniform() * 80),
          4 + std::floor(rng.uniform() * 30), 4 + std::floor(rng.uniform() * 30)};
}

// Up to 3 classes, up to 6 boxes per image, `images` images. Detections mix
// jittered copies of ground truth, duplicates and clutter; scores are
// sometimes coarse so that ties occur.
inline Scene random_scene(std::uint64_t seed, std::size_t images = 20) {
  Rng rng(seed);
  Scene s;
  const int classes = 1 + static_cast<int>(rng.uniform_index(3));
  const bool coarse = rng.uniform() < 0.5;
  auto score = [&] {
    const double v = rng.uniform();
    return coarse ? std::round(v * 10) / 10 : v;
  };
  for (std::size_t i = 0; i < images; ++i) {
    const std::string id = "img" + std::to_string(i);
    const std::size_t n_gt = rng.uniform_index(7);
    for (std::size_t g = 0; g < n_gt; ++g) {
      eval::GroundTruth gt{id, static_cast<int>(rng.uniform_index(classes)), random_box(rng)};
      s.gts.push_back(gt);
      const std::size_t copies = rng.uniform_index(3);
      for (std::size_t c = 0; c < copies; ++c) {
        eval::BoundingBox b = gt.box;
        b.left += std::round((rng.uniform() - 0.5) * b.width * 0.6);
        b.top += std::round((rng.uniform() - 0.5) * b.height * 0.6);
        b.width = std::max(1.0, b.width + std::round((rng.uniform() - 0.5) * 6));
        b.height = std::max(1.0, b.height + std::round((rng.uniform() - 0.5) * 6));
        s.dets.push_back({id, gt.class_id, b, score()});
      }
    }
    const std::size_t clutter = rng.uniform_index(3);
    for (std::size_t c = 0; c < clutter; ++c) {
      s.dets.push_back({id, static_cast<int>(rng.uniform_index(classes)), random_box(rng), score()});
    }
  }
  if (s.gts.empty()) s.gts.push_back({"img0", 0, {0, 0, 10, 10}});
  return s;
}

inline double ref_iou(const eval::BoundingBox& a, const eval::BoundingBox& b) {
  const double ax2 = a.left + a.width, ay2 = a.top + a.height;
  const double bx2 = b.left + b.width, by2 = b.top + b.height;
  const double ix = std::max(0.0, std::min(ax2, bx2) - std::max(a.left, b.left));
  const double iy = std::max(0.0, std::min(ay2, by2) - std::max(a.top, b.top));
  const double inter = ix * iy;
  if (inter == 0) return 0;
  return inter / (a.width * a.height + b.width * b.height - inter);
}

struct RefResult {
  std::map<int, std::vector<double>> ap;  // defined classes only
  std::vector<double> map_per_threshold;
  double map = 0;
};

inline RefResult reference_evaluate(const Scene& s, const eval::EvalConfig& cfg) {
  std::set<int> classes;
  for (const auto& g : s.gts) classes.insert(g.class_id);
  RefResult out;
  for (int cls : classes) {
    std::vector<std::size_t> det_idx;
    for (std::size_t i = 0; i < s.dets.size(); ++i) {
      if (s.dets[i].class_id == cls && s.dets[i].score >= cfg.score_floor) det_idx.push_back(i);
    }
    // selection sort by (score desc, input index asc)
    for (std::size_t i = 0; i < det_idx.size(); ++i) {
      std::size_t best = i;
      for (std::size_t j = i + 1; j < det_idx.size(); ++j) {
        const auto& a = s.dets[det_idx[j]];
        const auto& b = s.dets[det_idx[best]];
        if (a.score > b.score || (a.score == b.score && det_idx[j] < det_idx[best])) best = j;
      }
      std::swap(det_idx[i], det_idx[best]);
    }
    std::vector<std::size_t> gt_idx;
    for (std::size_t i = 0; i < s.gts.size(); ++i) {
      if (s.gts[i].class_id == cls) gt_idx.push_back(i);
    }
    const std::size_t n_gt = gt_idx.size();
    for (double thr : cfg.iou_thresholds) {
      std::vector<bool> used(gt_idx.size(), false);
      std::vector<int> tp_flags;
      for (std::size_t di : det_idx) {
        const auto& d = s.dets[di];
        int pick = -1;
        double best = 0;
        for (std::size_t g = 0; g < gt_idx.size(); ++g) {
          const auto& gt = s.gts[gt_idx[g]];
          if (used[g] || gt.image_id != d.image_id) continue;
          const double o = ref_iou(d.box, gt.box);
          if (o >= thr && (pick < 0 || o > best)) {
            pick = static_cast<int>(g);
            best = o;
          }
        }
        if (pick >= 0) used[static_cast<std::size_t>(pick)] = true;
        tp_flags.push_back(pick >= 0 ? 1 : 0);
      }
      std::vector<std::size_t> tp_cum(tp_flags.size());
      std::size_t acc = 0;
      for (std::size_t i = 0; i < tp_flags.size(); ++i) tp_cum[i] = acc += tp_flags[i];
      auto prec = [&](std::size_t i) { return double(tp_cum[i]) / double(i + 1); };
      double ap = 0;
      if (cfg.interpolation == eval::Interpolation::kVocAllPoint) {
        // VOC devkit form with sentinels
        std::vector<double> mrec{0}, mpre{0};
        for (std::size_t i = 0; i < tp_flags.size(); ++i) {
          mrec.push_back(double(tp_cum[i]) / double(n_gt));
          mpre.push_back(prec(i));
        }
        mrec.push_back(1);
        mpre.push_back(0);
        for (std::size_t i = mpre.size() - 1; i > 0; --i) mpre[i - 1] = std::max(mpre[i - 1], mpre[i]);
        for (std::size_t i = 1; i < mrec.size(); ++i) {
          if (mrec[i] != mrec[i - 1]) ap += (mrec[i] - mrec[i - 1]) * mpre[i];
        }
      } else {
        for (int t = 0; t <= 100; ++t) {
          // recall k/n >= t/100 exactly, in integers
          double best = 0;
          for (std::size_t i = 0; i < tp_flags.size(); ++i) {
            if (100 * tp_cum[i] >= static_cast<std::size_t>(t) * n_gt) best = std::max(best, prec(i));
          }
          ap += best;
        }
        ap /= 101;
      }
      out.ap[cls].push_back(ap);
    }
  }
  for (std::size_t t = 0; t < cfg.iou_thresholds.size(); ++t) {
    double sum = 0;
    for (const auto& [cls, aps] : out.ap) sum += aps[t];
    out.map_per_threshold.push_back(sum / double(out.ap.size()));
  }
  out.map = std::accumulate(out.map_per_threshold.begin(), out.map_per_threshold.end(), 0.0) /
            double(out.map_per_threshold.size());
  return out;
}

// Largest |difference| between evaluate() and the reference over every AP and
// the mAP; infinity on structural disagreement.
inline double evaluator_discrepancy(const Scene& s, const eval::EvalConfig& cfg) {
  const eval::EvalReport rep = eval::evaluate(s.dets, s.gts, cfg);
  const RefResult ref = reference_evaluate(s, cfg);
  double worst = std::abs(rep.map - ref.map);
  std::size_t defined = 0;
  for (const auto& c : rep.classes) {
    if (!c.defined) continue;
    ++defined;
    const auto it = ref.ap.find(c.class_id);
    if (it == ref.ap.end() || it->second.size() != c.ap.size()) return INFINITY;
    for (std::size_t t = 0; t < c.ap.size(); ++t) {
      worst = std::max(worst, std::abs(c.ap[t] - it->second[t]));
    }
  }
  if (defined != ref.ap.size()) return INFINITY;
  for (std::size_t t = 0; t < ref.map_per_threshold.size(); ++t) {
    worst = std::max(worst, std::abs(rep.map_per_threshold[t] - ref.map_per_threshold[t]));
  }
  return worst;
}

}  // namespace lowlight::testing

#endif  // LOWLIGHT_TESTS_EVAL_ORACLE_HPP_

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
#ifndef LOWLIGHT_EVALMAP_HPP_
#define LOWLIGHT_EVALMAP_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lowlight::eval {

// Half-open pixel rectangle [left, left+width) x [top, top+height).
struct BoundingBox {
  double left = 0;
  double top = 0;
  double width = 0;
  double height = 0;

  double area() const { return width * height; }
  bool valid() const { return width > 0 && height > 0; }
};

struct Detection {
  std::string image_id;
  int class_id = 0;
  BoundingBox box;
  double score = 0;
};

struct GroundTruth {
  std::string image_id;
  int class_id = 0;
  BoundingBox box;
};

enum class Interpolation { kVocAllPoint, kCoco101 };

struct EvalConfig {
  std::string protocol;  // "voc50", "coco" or free-form for custom sets
  std::vector<double> iou_thresholds;
  Interpolation interpolation = Interpolation::kVocAllPoint;
  double score_floor = 0.0;

  static EvalConfig voc50();
  static EvalConfig coco();
  // "voc50" or "coco"; Error(kInvalidConfig) otherwise.
  static EvalConfig from_protocol(std::string_view name);

  // Thresholds in (0,1] and strictly increasing.
  void validate() const;
};

double iou(const BoundingBox& a, const BoundingBox& b);

enum class MatchFlag : std::uint8_t { kFalsePositive, kTruePositive };

// Greedy matching for one (image, class): detections in descending score
// (ties keep input order) each take the unmatched GT with the highest IoU
// >= thr (ties: first GT). Flags are returned in input order.
// Error(kInvalidInput) on mixed image or class ids.
std::vector<MatchFlag> match_detections(std::span<const Detection> dets,
                                        std::span<const GroundTruth> gts,
                                        double thr);

struct PrPoint {
  double precision;
  double recall;
};

// One point per detection, flags already in score order. Empty when
// n_gt == 0 (AP undefined) or there are no detections.
std::vector<PrPoint> precision_recall(std::span<const MatchFlag> flags,
                                      std::size_t n_gt);

// Area under the precision envelope (all-point) or the mean envelope value
// at recall 0, 0.01, ..., 1 (101-point). Empty curve gives 0.
double average_precision(std::span<const PrPoint> pr, Interpolation method);

struct ClassResult {
  int class_id = 0;
  std::size_t n_gt = 0;
  std::size_t n_det = 0;
  // False when the class has no ground truth; such classes are left out of
  // the mAP (with a warning when they still have detections).
  bool defined = false;
  std::vector<double> ap;  // per threshold
  std::vector<std::size_t> tp;
  std::vector<std::size_t> fp;
  std::vector<std::size_t> missed;
  std::vector<std::vector<PrPoint>> pr;  // per threshold
};

struct EvalReport {
  EvalConfig config;
  std::vector<ClassResult> classes;  // ascending class id
  std::vector<double> map_per_threshold;
  double map = 0.0;
  // Classes with detections but no ground truth.
  std::size_t undefined_ap_classes = 0;
};

// Error(kInvalidInput) when gts is empty.
EvalReport evaluate(std::span<const Detection> dets,
                    std::span<const GroundTruth> gts, const EvalConfig& cfg);

using ClassNamer = std::function<std::string(int)>;

// JSON document:
//   { "protocol", "interpolation", "iou_thresholds", "score_floor",
//     "mAP", "mAP_per_threshold",
//     "classes": [ { "class_id", "class_name", "n_gt", "n_det", "defined",
//                    "ap" (per threshold, null if undefined), "ap_mean",
//                    "tp", "fp", "missed" } ],
//     "warnings": { "undefined_ap_classes" } }
std::string report_json(const EvalReport& report, const ClassNamer& namer);

// `class,threshold,recall,precision`, one row per PR point.
std::string pr_curve_csv(const EvalReport& report, const ClassNamer& namer);

// Fixed-width table for terminals.
std::string summary_table(const EvalReport& report, const ClassNamer& namer);

}  // namespace lowlight::eval

#endif  // LOWLIGHT_EVALMAP_HPP_

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
#include "lowlight/evalmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "lowlight/error.hpp"

namespace lowlight::eval {

EvalConfig EvalConfig::voc50() {
  return {"voc50", {0.5}, Interpolation::kVocAllPoint, 0.0};
}

EvalConfig EvalConfig::coco() {
  EvalConfig cfg{"coco", {}, Interpolation::kCoco101, 0.0};
  for (int i = 0; i < 10; ++i) cfg.iou_thresholds.push_back((50 + 5 * i) / 100.0);
  return cfg;
}

EvalConfig EvalConfig::from_protocol(std::string_view name) {
  if (name == "voc50") return voc50();
  if (name == "coco") return coco();
  fail(ErrorKind::kInvalidConfig,
       "unknown protocol '" + std::string(name) + "' (expected voc50 or coco)");
}

void EvalConfig::validate() const {
  if (iou_thresholds.empty()) fail(ErrorKind::kInvalidConfig, "no IoU thresholds");
  for (std::size_t i = 0; i < iou_thresholds.size(); ++i) {
    const double t = iou_thresholds[i];
    if (!(t > 0.0 && t <= 1.0)) {
      fail(ErrorKind::kInvalidConfig, "IoU thresholds must lie in (0,1]");
    }
    if (i > 0 && !(t > iou_thresholds[i - 1])) {
      fail(ErrorKind::kInvalidConfig, "IoU thresholds must be strictly increasing");
    }
  }
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.left + a.width, b.left + b.width) - std::max(a.left, b.left);
  const double ih = std::min(a.top + a.height, b.top + b.height) - std::max(a.top, b.top);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

namespace {

std::vector<std::size_t> score_order(std::span<const Detection> dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  return order;
}

}  // namespace

std::vector<MatchFlag> match_detections(std::span<const Detection> dets,
                                        std::span<const GroundTruth> gts,
                                        double thr) {
  std::vector<MatchFlag> flags(dets.size(), MatchFlag::kFalsePositive);
  if (dets.empty()) return flags;
  const std::string& image = dets.front().image_id;
  const int cls = dets.front().class_id;
  for (const Detection& d : dets) {
    if (d.image_id != image || d.class_id != cls) {
      fail(ErrorKind::kInvalidInput, "match_detections: mixed image or class ids");
    }
  }
  for (const GroundTruth& g : gts) {
    if (g.image_id != image || g.class_id != cls) {
      fail(ErrorKind::kInvalidInput, "match_detections: mixed image or class ids");
    }
  }
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t di : score_order(dets)) {
    double best = -1.0;
    std::size_t best_gt = gts.size();
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (taken[gi]) continue;
      const double o = iou(dets[di].box, gts[gi].box);
      if (o >= thr && o > best) {
        best = o;
        best_gt = gi;
      }
    }
    if (best_gt < gts.size()) {
      taken[best_gt] = true;
      flags[di] = MatchFlag::kTruePositive;
    }
  }
  return flags;
}

std::vector<PrPoint> precision_recall(std::span<const MatchFlag> flags,
                                      std::size_t n_gt) {
  std::vector<PrPoint> out;
  if (n_gt == 0) return out;
  out.reserve(flags.size());
  std::size_t tp = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i] == MatchFlag::kTruePositive) ++tp;
    out.push_back({static_cast<double>(tp) / static_cast<double>(i + 1),
                   static_cast<double>(tp) / static_cast<double>(n_gt)});
  }
  return out;
}

double average_precision(std::span<const PrPoint> pr, Interpolation method) {
  if (pr.empty()) return 0.0;
  std::vector<double> env(pr.size());
  double running = 0.0;
  for (std::size_t i = pr.size(); i-- > 0;) {
    running = std::max(running, pr[i].precision);
    env[i] = running;
  }
  if (method == Interpolation::kVocAllPoint) {
    double ap = 0.0, prev_recall = 0.0;
    for (std::size_t i = 0; i < pr.size(); ++i) {
      ap += (pr[i].recall - prev_recall) * env[i];
      prev_recall = pr[i].recall;
    }
    return ap;
  }
  double total = 0.0;
  std::size_t i = 0;
  for (int t = 0; t <= 100; ++t) {
    const double r = t / 100.0;
    while (i < pr.size() && pr[i].recall < r) ++i;
    if (i < pr.size()) total += env[i];
  }
  return total / 101.0;
}

EvalReport evaluate(std::span<const Detection> dets,
                    std::span<const GroundTruth> gts, const EvalConfig& cfg) {
  cfg.validate();
  if (gts.empty()) fail(ErrorKind::kInvalidInput, "evaluate: ground-truth set is empty");

  std::set<int> class_ids;
  for (const auto& g : gts) class_ids.insert(g.class_id);
  std::vector<Detection> kept;
  for (const auto& d : dets) {
    if (d.score >= cfg.score_floor) {
      kept.push_back(d);
      class_ids.insert(d.class_id);
    }
  }

  const std::size_t n_thr = cfg.iou_thresholds.size();
  EvalReport report;
  report.config = cfg;
  for (int cls : class_ids) {
    std::map<std::string, std::vector<GroundTruth>> gt_by_image;
    ClassResult res;
    res.class_id = cls;
    for (const auto& g : gts) {
      if (g.class_id == cls) {
        gt_by_image[g.image_id].push_back(g);
        ++res.n_gt;
      }
    }
    std::vector<Detection> cdets;
    for (const auto& d : kept) {
      if (d.class_id == cls) cdets.push_back(d);
    }
    res.n_det = cdets.size();
    res.defined = res.n_gt > 0;
    if (!res.defined && res.n_det > 0) ++report.undefined_ap_classes;

    // Pool across images in descending score; matching per image sees the
    // same relative order, so it can run on per-image slices.
    const std::vector<std::size_t> order = score_order(cdets);
    std::map<std::string, std::vector<std::size_t>> ranks_by_image;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      ranks_by_image[cdets[order[rank]].image_id].push_back(rank);
    }
    static const std::vector<GroundTruth> kNoGt;
    for (double thr : cfg.iou_thresholds) {
      std::vector<MatchFlag> flags(order.size(), MatchFlag::kFalsePositive);
      for (const auto& [image, ranks] : ranks_by_image) {
        std::vector<Detection> slice;
        slice.reserve(ranks.size());
        for (std::size_t r : ranks) slice.push_back(cdets[order[r]]);
        const auto it = gt_by_image.find(image);
        const auto& img_gts = it == gt_by_image.end() ? kNoGt : it->second;
        const std::vector<MatchFlag> f = match_detections(slice, img_gts, thr);
        for (std::size_t k = 0; k < ranks.size(); ++k) flags[ranks[k]] = f[k];
      }
      const std::size_t tp = static_cast<std::size_t>(
          std::count(flags.begin(), flags.end(), MatchFlag::kTruePositive));
      res.tp.push_back(tp);
      res.fp.push_back(flags.size() - tp);
      res.missed.push_back(res.n_gt - tp);
      std::vector<PrPoint> pr = precision_recall(flags, res.n_gt);
      res.ap.push_back(res.defined ? average_precision(pr, cfg.interpolation)
                                   : std::numeric_limits<double>::quiet_NaN());
      res.pr.push_back(std::move(pr));
    }
    report.classes.push_back(std::move(res));
  }

  report.map_per_threshold.assign(n_thr, 0.0);
  for (std::size_t t = 0; t < n_thr; ++t) {
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& c : report.classes) {
      if (!c.defined) continue;
      total += c.ap[t];
      ++n;
    }
    report.map_per_threshold[t] = n ? total / static_cast<double>(n) : 0.0;
  }
  double total = 0.0;
  for (double m : report.map_per_threshold) total += m;
  report.map = total / static_cast<double>(n_thr);
  return report;
}

namespace {

const char* interpolation_name(Interpolation i) {
  return i == Interpolation::kVocAllPoint ? "voc-all-point" : "coco-101-point";
}

}  // namespace

std::string report_json(const EvalReport& report, const ClassNamer& namer) {
  using nlohmann::json;
  json doc;
  doc["protocol"] = report.config.protocol;
  doc["interpolation"] = interpolation_name(report.config.interpolation);
  doc["iou_thresholds"] = report.config.iou_thresholds;
  doc["score_floor"] = report.config.score_floor;
  doc["mAP"] = report.map;
  doc["mAP_per_threshold"] = report.map_per_threshold;
  json classes = json::array();
  for (const auto& c : report.classes) {
    json jc;
    jc["class_id"] = c.class_id;
    jc["class_name"] = namer(c.class_id);
    jc["n_gt"] = c.n_gt;
    jc["n_det"] = c.n_det;
    jc["defined"] = c.defined;
    json ap = json::array();
    double sum = 0.0;
    for (double v : c.ap) {
      if (c.defined) {
        ap.push_back(v);
        sum += v;
      } else {
        ap.push_back(nullptr);
      }
    }
    jc["ap"] = ap;
    jc["ap_mean"] = c.defined ? json(sum / static_cast<double>(c.ap.size())) : json(nullptr);
    jc["tp"] = c.tp;
    jc["fp"] = c.fp;
    jc["missed"] = c.missed;
    classes.push_back(std::move(jc));
  }
  doc["classes"] = std::move(classes);
  doc["warnings"] = {{"undefined_ap_classes", report.undefined_ap_classes}};
  return doc.dump(2) + "\n";
}

std::string pr_curve_csv(const EvalReport& report, const ClassNamer& namer) {
  std::string out = "class,threshold,recall,precision\n";
  char buf[128];
  for (const auto& c : report.classes) {
    const std::string name = namer(c.class_id);
    for (std::size_t t = 0; t < c.pr.size(); ++t) {
      for (const PrPoint& p : c.pr[t]) {
        std::snprintf(buf, sizeof buf, ",%.6g,%.12g,%.12g\n",
                      report.config.iou_thresholds[t], p.recall, p.precision);
        out += name;
        out += buf;
      }
    }
  }
  return out;
}

std::string summary_table(const EvalReport& report, const ClassNamer& namer) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "protocol: %s (%s)\n", report.config.protocol.c_str(),
                interpolation_name(report.config.interpolation));
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %6s %6s %8s\n", "class", "n_gt", "n_det", "AP");
  out += buf;
  for (const auto& c : report.classes) {
    if (c.defined) {
      double sum = 0.0;
      for (double v : c.ap) sum += v;
      std::snprintf(buf, sizeof buf, "%-16s %6zu %6zu %8.4f\n", namer(c.class_id).c_str(),
                    c.n_gt, c.n_det, sum / static_cast<double>(c.ap.size()));
    } else {
      std::snprintf(buf, sizeof buf, "%-16s %6zu %6zu %8s\n", namer(c.class_id).c_str(),
                    c.n_gt, c.n_det, "n/a");
    }
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "mAP: %.4f\n", report.map);
  out += buf;
  if (report.undefined_ap_classes > 0) {
    std::snprintf(buf, sizeof buf,
                  "warning: %zu class(es) have detections but no ground truth\n",
                  report.undefined_ap_classes);
    out += buf;
  }
  return out;
}

}  // namespace lowlight::eval

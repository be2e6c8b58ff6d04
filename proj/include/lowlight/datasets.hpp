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
#ifndef LOWLIGHT_DATASETS_HPP_
#define LOWLIGHT_DATASETS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lowlight/evalmap.hpp"
#include "lowlight/pixelops.hpp"

namespace lowlight::data {

// Canonical class ids are dense from 0. Lookups are case-insensitive and go
// through an alias map.
class ClassTable {
 public:
  ClassTable(std::vector<std::string> names,
             std::map<std::string, std::string> aliases);

  // The 12 ExDark categories under their COCO names.
  static const ClassTable& exdark();

  // Error(kNoMapping) for unknown names.
  int map_class_name(std::string_view name) const;
  // -1 for unknown names.
  int find(std::string_view name) const;
  const std::string& name(int id) const;
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> lookup_;  // lower-case name or alias -> id
};

struct AnnotationSet {
  std::vector<eval::GroundTruth> boxes;
  std::vector<std::string> warnings;
};

// `%` lines are comments; every other non-blank line is
// `classname l t w h [extras...]`. Unknown classes and empty boxes become
// warnings. Malformed numbers raise Error(kParse) naming the line.
AnnotationSet parse_exdark_annotations(std::string_view text,
                                       const ClassTable& table,
                                       const std::string& image_id);

struct DetectionSet {
  std::vector<eval::Detection> detections;
  std::vector<std::string> warnings;
};

// JSON array of {"image_id": str, "class_name": str,
// "bbox": [l, t, w, h], "score": number in [0,1]}. Other members are ignored.
// Schema errors raise Error(kParse), out-of-range values Error(kValidation).
// Records with unknown class names are skipped with a warning.
DetectionSet parse_detections(std::string_view text, const ClassTable& table);

struct ImageRecord {
  std::string id;
  std::filesystem::path path;  // annotation file
  std::size_t width = 0;       // 0 when no sibling PPM was found
  std::size_t height = 0;
};

// Immutable index of a ground-truth directory. Ids are unique and every box
// refers to an indexed image.
class DatasetIndex {
 public:
  // One `<id>.txt` per image. A trailing image extension on the stem
  // (`2015_00001.png.txt`) is dropped from the id. Sizes come from a sibling
  // `<id>.ppm` when present.
  static DatasetIndex load(const std::filesystem::path& gt_dir,
                           const ClassTable& table);
  static DatasetIndex from_parts(std::vector<ImageRecord> images,
                                 std::vector<eval::GroundTruth> boxes);

  const std::vector<ImageRecord>& images() const { return images_; }
  const std::vector<eval::GroundTruth>& ground_truth() const { return boxes_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool contains(std::string_view id) const;

  // Sorted, deduplicated ids referenced by `dets` but absent here.
  std::vector<std::string> unknown_image_ids(
      std::span<const eval::Detection> dets) const;

 private:
  std::vector<ImageRecord> images_;  // sorted by id
  std::vector<eval::GroundTruth> boxes_;
  std::vector<std::string> warnings_;
};

// P6 with maxval 255 only. Other magics or maxvals raise
// Error(kUnsupportedFormat), short payloads Error(kTruncated) and malformed
// headers Error(kFormat).
RasterImage read_ppm(std::span<const std::uint8_t> bytes);
// `P6\n{w} {h}\n255\n` followed by raw samples. 3-channel images only.
std::vector<std::uint8_t> write_ppm(const RasterImage& img);

RasterImage read_ppm_file(const std::filesystem::path& path);
void write_ppm_file(const std::filesystem::path& path, const RasterImage& img);

// File helpers raising Error(kIo).
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path,
                 std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);

// Regular files in `dir` with extension `ext` (case-insensitive, with dot),
// sorted by file name.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              std::string_view ext);

}  // namespace lowlight::data

#endif  // LOWLIGHT_DATASETS_HPP_

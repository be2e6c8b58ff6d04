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
#include "lowlight/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lowlight/error.hpp"

namespace lowlight::data {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

ClassTable::ClassTable(std::vector<std::string> names,
                       std::map<std::string, std::string> aliases)
    : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!lookup_.emplace(lower(names_[i]), static_cast<int>(i)).second) {
      fail(ErrorKind::kInvalidInput, "duplicate class name '" + names_[i] + "'");
    }
  }
  for (const auto& [alias, target] : aliases) {
    const auto it = lookup_.find(lower(target));
    if (it == lookup_.end()) {
      fail(ErrorKind::kInvalidInput, "alias '" + alias + "' targets unknown class");
    }
    const int id = it->second;
    const auto [pos, inserted] = lookup_.emplace(lower(alias), id);
    if (!inserted && pos->second != id) {
      fail(ErrorKind::kInvalidInput, "alias '" + alias + "' is ambiguous");
    }
  }
}

const ClassTable& ClassTable::exdark() {
  static const ClassTable table(
      {"bicycle", "boat", "bottle", "bus", "car", "cat", "chair", "cup", "dog",
       "motorcycle", "person", "dining table"},
      {{"people", "person"}, {"motorbike", "motorcycle"}, {"table", "dining table"}});
  return table;
}

int ClassTable::find(std::string_view name) const {
  const auto it = lookup_.find(lower(name));
  return it == lookup_.end() ? -1 : it->second;
}

int ClassTable::map_class_name(std::string_view name) const {
  const int id = find(name);
  if (id < 0) fail(ErrorKind::kNoMapping, "no class mapping for '" + std::string(name) + "'");
  return id;
}

const std::string& ClassTable::name(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= names_.size()) {
    fail(ErrorKind::kInvalidInput, "class id " + std::to_string(id) + " out of range");
  }
  return names_[static_cast<std::size_t>(id)];
}

AnnotationSet parse_exdark_annotations(std::string_view text,
                                       const ClassTable& table,
                                       const std::string& image_id) {
  AnnotationSet out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '%') continue;
    const std::string where = image_id + " line " + std::to_string(line_no);
    if (toks.size() < 5) {
      fail(ErrorKind::kParse, where + ": expected 'class l t w h', got " +
                                  std::to_string(toks.size()) + " field(s)");
    }
    double v[4];
    for (int k = 0; k < 4; ++k) {
      if (!parse_double(toks[1 + k], v[k])) {
        fail(ErrorKind::kParse, where + ": malformed number '" + std::string(toks[1 + k]) + "'");
      }
    }
    const int cls = table.find(toks[0]);
    if (cls < 0) {
      out.warnings.push_back(where + ": unknown class '" + std::string(toks[0]) + "' skipped");
      continue;
    }
    eval::BoundingBox box{v[0], v[1], v[2], v[3]};
    if (!box.valid()) {
      out.warnings.push_back(where + ": empty box skipped");
      continue;
    }
    out.boxes.push_back({image_id, cls, box});
  }
  return out;
}

DetectionSet parse_detections(std::string_view text, const ClassTable& table) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    fail(ErrorKind::kParse, std::string("detections: ") + e.what());
  }
  if (!doc.is_array()) fail(ErrorKind::kParse, "detections: top level must be an array");
  DetectionSet out;
  out.detections.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& rec = doc[i];
    const std::string where = "detections[" + std::to_string(i) + "]";
    if (!rec.is_object()) fail(ErrorKind::kParse, where + ": expected an object");
    auto field = [&](const char* key) -> const json& {
      const auto it = rec.find(key);
      if (it == rec.end()) fail(ErrorKind::kParse, where + ": missing '" + key + "'");
      return *it;
    };
    const json& id = field("image_id");
    const json& cls = field("class_name");
    const json& bbox = field("bbox");
    const json& score = field("score");
    if (!id.is_string()) fail(ErrorKind::kParse, where + ": 'image_id' must be a string");
    if (!cls.is_string()) fail(ErrorKind::kParse, where + ": 'class_name' must be a string");
    if (!bbox.is_array() || bbox.size() != 4) {
      fail(ErrorKind::kParse, where + ": 'bbox' must be [l, t, w, h]");
    }
    for (const json& v : bbox) {
      if (!v.is_number()) fail(ErrorKind::kParse, where + ": 'bbox' entries must be numbers");
    }
    if (!score.is_number()) fail(ErrorKind::kParse, where + ": 'score' must be a number");
    const double s = score.get<double>();
    if (!(s >= 0.0 && s <= 1.0)) {
      fail(ErrorKind::kValidation, where + ": score " + score.dump() + " outside [0,1]");
    }
    eval::BoundingBox box{bbox[0].get<double>(), bbox[1].get<double>(),
                          bbox[2].get<double>(), bbox[3].get<double>()};
    if (!box.valid()) {
      fail(ErrorKind::kValidation, where + ": bbox width and height must be positive");
    }
    const std::string& name = cls.get_ref<const std::string&>();
    const int cid = table.find(name);
    if (cid < 0) {
      out.warnings.push_back(where + ": unknown class '" + name + "' skipped");
      continue;
    }
    out.detections.push_back({id.get<std::string>(), cid, box, s});
  }
  return out;
}

namespace {

std::string strip_image_ext(std::string stem) {
  static const char* kExts[] = {".ppm", ".png", ".jpg", ".jpeg", ".bmp"};
  const std::string low = lower(stem);
  for (const char* e : kExts) {
    const std::string_view ext(e);
    if (low.size() > ext.size() && low.ends_with(ext)) {
      stem.resize(stem.size() - ext.size());
      break;
    }
  }
  return stem;
}

// Width and height from a P6 header, without reading the payload.
bool ppm_size(const fs::path& path, std::size_t& w, std::size_t& h) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::vector<std::uint8_t> head(256);
  in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  std::size_t i = 0;
  auto skip = [&] {
    while (i < head.size()) {
      if (head[i] == '#') {
        while (i < head.size() && head[i] != '\n') ++i;
      } else if (is_space(static_cast<char>(head[i]))) {
        ++i;
      } else {
        break;
      }
    }
  };
  auto num = [&](std::size_t& v) {
    skip();
    const std::size_t start = i;
    v = 0;
    while (i < head.size() && head[i] >= '0' && head[i] <= '9' && i - start < 9) {
      v = v * 10 + (head[i] - '0');
      ++i;
    }
    return i > start;
  };
  if (head.size() < 2 || head[0] != 'P' || head[1] != '6') return false;
  i = 2;
  return num(w) && num(h) && w > 0 && h > 0;
}

}  // namespace

DatasetIndex DatasetIndex::load(const fs::path& gt_dir, const ClassTable& table) {
  DatasetIndex idx;
  std::set<std::string> seen;
  for (const fs::path& p : list_files(gt_dir, ".txt")) {
    ImageRecord rec;
    rec.id = strip_image_ext(p.stem().string());
    rec.path = p;
    if (!seen.insert(rec.id).second) {
      fail(ErrorKind::kValidation, "duplicate image id '" + rec.id + "' in " + gt_dir.string());
    }
    const fs::path ppm = gt_dir / (rec.id + ".ppm");
    std::error_code ec;
    if (fs::is_regular_file(ppm, ec)) ppm_size(ppm, rec.width, rec.height);
    AnnotationSet ann;
    try {
      ann = parse_exdark_annotations(read_text(p), table, rec.id);
    } catch (const Error& e) {
      throw Error(e.kind(), p.filename().string() + ": " + e.what());
    }
    for (auto& w : ann.warnings) idx.warnings_.push_back(std::move(w));
    for (auto& b : ann.boxes) idx.boxes_.push_back(std::move(b));
    idx.images_.push_back(std::move(rec));
  }
  std::sort(idx.images_.begin(), idx.images_.end(),
            [](const ImageRecord& a, const ImageRecord& b) { return a.id < b.id; });
  return idx;
}

DatasetIndex DatasetIndex::from_parts(std::vector<ImageRecord> images,
                                      std::vector<eval::GroundTruth> boxes) {
  DatasetIndex idx;
  idx.images_ = std::move(images);
  std::sort(idx.images_.begin(), idx.images_.end(),
            [](const ImageRecord& a, const ImageRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < idx.images_.size(); ++i) {
    if (idx.images_[i].id == idx.images_[i - 1].id) {
      fail(ErrorKind::kValidation, "duplicate image id '" + idx.images_[i].id + "'");
    }
  }
  for (const auto& b : boxes) {
    if (!idx.contains(b.image_id)) {
      fail(ErrorKind::kValidation, "ground truth refers to unknown image '" + b.image_id + "'");
    }
  }
  idx.boxes_ = std::move(boxes);
  return idx;
}

bool DatasetIndex::contains(std::string_view id) const {
  const auto it = std::lower_bound(
      images_.begin(), images_.end(), id,
      [](const ImageRecord& r, std::string_view key) { return r.id < key; });
  return it != images_.end() && it->id == id;
}

std::vector<std::string> DatasetIndex::unknown_image_ids(
    std::span<const eval::Detection> dets) const {
  std::set<std::string> missing;
  for (const auto& d : dets) {
    if (!contains(d.image_id)) missing.insert(d.image_id);
  }
  return {missing.begin(), missing.end()};
}

RasterImage read_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    fail(ErrorKind::kUnsupportedFormat, "not a PPM file");
  }
  if (bytes[1] != '6') {
    fail(ErrorKind::kUnsupportedFormat,
         std::string("unsupported PNM variant P") + static_cast<char>(bytes[1]));
  }
  std::size_t i = 2;
  auto skip = [&] {
    while (i < bytes.size()) {
      if (bytes[i] == '#') {
        while (i < bytes.size() && bytes[i] != '\n') ++i;
      } else if (is_space(static_cast<char>(bytes[i]))) {
        ++i;
      } else {
        break;
      }
    }
  };
  auto number = [&](const char* what) -> std::size_t {
    if (i < bytes.size() && !is_space(static_cast<char>(bytes[i])) && bytes[i] != '#') {
      fail(ErrorKind::kFormat, std::string("PPM: expected whitespace before ") + what);
    }
    skip();
    if (i >= bytes.size()) fail(ErrorKind::kTruncated, std::string("PPM: header ends before ") + what);
    const std::size_t start = i;
    std::size_t v = 0;
    while (i < bytes.size() && bytes[i] >= '0' && bytes[i] <= '9') {
      if (i - start >= 9) fail(ErrorKind::kFormat, std::string("PPM: ") + what + " too large");
      v = v * 10 + static_cast<std::size_t>(bytes[i] - '0');
      ++i;
    }
    if (i == start) fail(ErrorKind::kFormat, std::string("PPM: malformed ") + what);
    return v;
  };
  const std::size_t w = number("width");
  const std::size_t h = number("height");
  const std::size_t maxval = number("maxval");
  if (w == 0 || h == 0) fail(ErrorKind::kFormat, "PPM: zero image extent");
  if (maxval != 255) {
    fail(ErrorKind::kUnsupportedFormat, "PPM: maxval " + std::to_string(maxval) + " not supported");
  }
  if (i >= bytes.size()) fail(ErrorKind::kTruncated, "PPM: missing payload");
  if (!is_space(static_cast<char>(bytes[i]))) fail(ErrorKind::kFormat, "PPM: malformed header end");
  ++i;
  const std::size_t need = w * h * 3;  // both below 1e9, no overflow
  if (bytes.size() - i < need) {
    fail(ErrorKind::kTruncated, "PPM: payload has " + std::to_string(bytes.size() - i) +
                                    " of " + std::to_string(need) + " bytes");
  }
  std::vector<std::uint8_t> data(bytes.begin() + static_cast<std::ptrdiff_t>(i),
                                 bytes.begin() + static_cast<std::ptrdiff_t>(i + need));
  return RasterImage(w, h, 3, std::move(data));
}

std::vector<std::uint8_t> write_ppm(const RasterImage& img) {
  if (img.channels() != 3) {
    fail(ErrorKind::kInvalidInput, "PPM output needs 3 channels, got " +
                                       std::to_string(img.channels()));
  }
  const std::string header = "P6\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

RasterImage read_ppm_file(const fs::path& path) {
  try {
    return read_ppm(read_bytes(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_ppm_file(const fs::path& path, const RasterImage& img) {
  write_bytes(path, write_ppm(img));
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> out((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::kIo, "read failed: " + path.string());
  return out;
}

std::string read_text(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed: " + path.string());
}

void write_text(const fs::path& path, std::string_view text) {
  write_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::vector<fs::path> list_files(const fs::path& dir, std::string_view ext) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(ErrorKind::kIo, "not a directory: " + dir.string());
  const std::string want = lower(ext);
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    if (lower(entry.path().extension().string()) == want) out.push_back(entry.path());
  }
  if (ec) fail(ErrorKind::kIo, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return out;
}

}  // namespace lowlight::data

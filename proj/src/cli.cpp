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
#include "lowlight/cli.hpp"

#include <chrono>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "lowlight/datasets.hpp"
#include "lowlight/evalmap.hpp"
#include "lowlight/gan/network.hpp"
#include "lowlight/gan/weights.hpp"
#include "lowlight/pixelops.hpp"

namespace lowlight::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kInvalidConfig:
      return kExitUsage;
    case ErrorKind::kParse:
    case ErrorKind::kFormat:
    case ErrorKind::kUnsupportedFormat:
    case ErrorKind::kTruncated:
      return kExitParse;
    case ErrorKind::kValidation:
    case ErrorKind::kNoMapping:
      return kExitValidation;
    case ErrorKind::kIncompatibleWeights:
      return kExitIncompatible;
    case ErrorKind::kInvalidInput:
    case ErrorKind::kInvalidShape:
    case ErrorKind::kIo:
      return kExitFailure;
  }
  return kExitFailure;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value, std::size_t line) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || value.empty()) {
    fail(ErrorKind::kUsage, "config line " + std::to_string(line) + ": invalid value '" +
                                value + "' for " + key);
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) {
      fail(ErrorKind::kUsage, "config line " + std::to_string(line) + ": " + key +
                                  " must be finite");
    }
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TrainSettings parse_train_config(std::string_view text) {
  TrainSettings s;
  auto& t = s.train;
  auto& a = s.arch;
  using Setter = std::function<void(const std::string&, const std::string&, std::size_t)>;
  auto size_field = [](std::size_t& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v, std::size_t line) {
      dst = parse_number<std::size_t>(k, v, line);
    };
  };
  auto double_field = [](double& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v, std::size_t line) {
      dst = parse_number<double>(k, v, line);
    };
  };
  const std::map<std::string, Setter> setters = {
      {"arch",
       [&](const std::string& k, const std::string& v, std::size_t line) {
         try {
           a.arch = gan::parse_arch(v);
         } catch (const Error&) {
           fail(ErrorKind::kUsage, "config line " + std::to_string(line) + ": invalid value '" +
                                       v + "' for " + k + " (resnet9 or unet256)");
         }
       }},
      {"base", size_field(a.base)},
      {"n_blocks", size_field(a.n_blocks)},
      {"depth", size_field(a.depth)},
      {"disc_base", size_field(a.disc_base)},
      {"disc_layers", size_field(a.disc_layers)},
      {"epochs", size_field(t.epochs)},
      {"batch_size", size_field(t.batch_size)},
      {"lr", double_field(t.lr)},
      {"beta1", double_field(t.beta1)},
      {"beta2", double_field(t.beta2)},
      {"lambda_cyc", double_field(t.lambda_cyc)},
      {"lambda_idt", double_field(t.lambda_idt)},
      {"pool_size", size_field(t.pool_size)},
      {"seed",
       [&](const std::string& k, const std::string& v, std::size_t line) {
         t.seed = parse_number<std::uint64_t>(k, v, line);
       }},
      {"image_size", size_field(t.image_size)},
      {"decay_epochs", size_field(t.decay_epochs)},
  };

  std::set<std::string> seen;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::kUsage, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      fail(ErrorKind::kUsage, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      fail(ErrorKind::kUsage, "config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    it->second(key, value, line_no);
  }

  try {
    t.validate();
  } catch (const Error& e) {
    fail(ErrorKind::kUsage, std::string("config: ") + e.what());
  }
  auto positive = [](std::size_t v, const char* field) {
    if (v == 0) fail(ErrorKind::kUsage, std::string("config: ") + field + " must be >= 1");
  };
  positive(a.base, "base");
  positive(a.disc_base, "disc_base");
  positive(a.disc_layers, "disc_layers");
  if (a.arch == gan::GeneratorArch::kUnet) positive(a.depth, "depth");
  return s;
}

std::string config_text(const TrainSettings& s) {
  const auto& t = s.train;
  const auto& a = s.arch;
  std::string out;
  auto kv = [&](const char* k, const std::string& v) { out += std::string(k) + " = " + v + "\n"; };
  kv("arch", std::string(gan::to_string(a.arch)));
  kv("base", std::to_string(a.base));
  kv("n_blocks", std::to_string(a.n_blocks));
  kv("depth", std::to_string(a.depth));
  kv("disc_base", std::to_string(a.disc_base));
  kv("disc_layers", std::to_string(a.disc_layers));
  kv("epochs", std::to_string(t.epochs));
  kv("batch_size", std::to_string(t.batch_size));
  kv("lr", fmt_double(t.lr));
  kv("beta1", fmt_double(t.beta1));
  kv("beta2", fmt_double(t.beta2));
  kv("lambda_cyc", fmt_double(t.lambda_cyc));
  kv("lambda_idt", fmt_double(t.lambda_idt));
  kv("pool_size", std::to_string(t.pool_size));
  kv("seed", std::to_string(t.seed));
  kv("image_size", std::to_string(t.image_size));
  kv("decay_epochs", std::to_string(t.decay_epochs));
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Manifest {
  std::string command;
  json config = json::object();
  json inputs = json::object();
  json outputs = json::array();
  std::optional<std::uint64_t> seed;
  Clock::time_point started = Clock::now();

  void write(const fs::path& path) const {
    json doc;
    doc["command"] = command;
    doc["tool_version"] = std::string(kToolVersion);
    doc["config"] = config;
    doc["inputs"] = inputs;
    doc["outputs"] = outputs;
    doc["seed"] = seed ? json(*seed) : json(nullptr);
    doc["wall_time_s"] =
        std::chrono::duration<double>(Clock::now() - started).count();
    data::write_text(path, doc.dump(2) + "\n");
  }
};

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
  return fs::path(p.string() + suffix);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    fail(ErrorKind::kIo, "cannot create directory " + dir.string());
  }
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) ensure_dir(file.parent_path());
}

gan::NetworkSpec generator_for(const EnhanceOptions& o) {
  gan::ArchConfig a;
  a.arch = gan::parse_arch(*o.arch);
  a.base = o.base;
  a.n_blocks = o.n_blocks;
  a.depth = o.depth;
  return a.generator_spec();
}

}  // namespace

void cmd_enhance(const EnhanceOptions& opts, std::ostream& log, std::ostream& warn) {
  if (opts.method != "he" && opts.method != "cyclegan") {
    fail(ErrorKind::kUsage, "--method must be he or cyclegan");
  }
  Manifest m;
  m.command = "enhance";
  m.config = {{"method", opts.method}, {"hist", opts.hist}};
  m.inputs = {{"in_dir", opts.in_dir.string()}};

  std::optional<gan::Network> net;
  if (opts.method == "cyclegan") {
    if (!opts.weights) fail(ErrorKind::kUsage, "--method cyclegan requires --weights");
    if (!opts.arch) fail(ErrorKind::kUsage, "--method cyclegan requires --arch");
    gan::NetworkSpec spec;
    try {
      spec = generator_for(opts);
    } catch (const Error& e) {
      fail(ErrorKind::kUsage, std::string("--arch: ") + e.what());
    }
    const gan::WeightStore store = gan::load_weights(data::read_bytes(*opts.weights));
    net.emplace(spec, store);
    m.config["arch"] = *opts.arch;
    m.config["base"] = opts.base;
    m.config["n_blocks"] = opts.n_blocks;
    m.config["depth"] = opts.depth;
    m.inputs["weights"] = opts.weights->string();
  }

  const auto files = data::list_files(opts.in_dir, ".ppm");
  if (files.empty()) {
    fail(ErrorKind::kUsage, "no inputs: no .ppm files in " + opts.in_dir.string());
  }
  ensure_dir(opts.out_dir);

  std::size_t ok = 0;
  std::optional<Error> first_failure;
  for (const fs::path& in : files) {
    try {
      const RasterImage img = data::read_ppm_file(in);
      const RasterImage out = net ? gan::translate(*net, img) : enhance_he(img);
      const fs::path dst = opts.out_dir / in.filename();
      data::write_ppm_file(dst, out);
      m.outputs.push_back(dst.string());
      if (opts.hist) {
        const std::string stem = in.stem().string();
        const fs::path before = opts.out_dir / (stem + ".hist_before.csv");
        const fs::path after = opts.out_dir / (stem + ".hist_after.csv");
        data::write_text(before, histogram_csv(histogram_report(img)));
        data::write_text(after, histogram_csv(histogram_report(out)));
        m.outputs.push_back(before.string());
        m.outputs.push_back(after.string());
      }
      ++ok;
    } catch (const Error& e) {
      warn << "warning: " << in.filename().string() << ": " << e.what() << "\n";
      if (!first_failure) first_failure = e;
    }
  }
  if (ok == 0) {
    throw Error(first_failure->kind(),
                "all " + std::to_string(files.size()) + " input(s) failed; first: " +
                    first_failure->what());
  }
  m.write(opts.out_dir / "manifest.json");
  log << "enhanced " << ok << " of " << files.size() << " image(s) into "
      << opts.out_dir.string() << "\n";
}

namespace {

std::vector<RasterImage> load_domain(const fs::path& dir) {
  const auto files = data::list_files(dir, ".ppm");
  if (files.empty()) fail(ErrorKind::kUsage, "no inputs: no .ppm files in " + dir.string());
  std::vector<RasterImage> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(data::read_ppm_file(f));
  return out;
}

}  // namespace

void cmd_train(const TrainOptions& opts, std::ostream& log, std::ostream&) {
  const TrainSettings s = parse_train_config(data::read_text(opts.config));
  const auto a = load_domain(opts.domain_a);
  const auto b = load_domain(opts.domain_b);
  for (const auto* dom : {&a, &b}) {
    for (const auto& img : *dom) {
      if (img.width() != s.train.image_size || img.height() != s.train.image_size) {
        fail(ErrorKind::kValidation,
             "training images must be image_size x image_size (" +
                 std::to_string(s.train.image_size) + "), got " + std::to_string(img.width()) +
                 "x" + std::to_string(img.height()));
      }
    }
  }
  try {
    gan::infer_output_shape(s.arch.generator_spec(),
                            {1, 3, s.train.image_size, s.train.image_size});
  } catch (const Error& e) {
    fail(ErrorKind::kUsage, std::string("config: ") + e.what());
  }

  Manifest m;
  m.command = "train";
  m.seed = s.train.seed;
  const std::string echo = config_text(s);
  for (std::size_t pos = 0; pos < echo.size();) {
    const auto end = echo.find('\n', pos);
    const auto eq = echo.find(" = ", pos);
    m.config[echo.substr(pos, eq - pos)] = echo.substr(eq + 3, end - eq - 3);
    pos = end + 1;
  }
  m.inputs = {{"config", opts.config.string()},
              {"domain_a", opts.domain_a.string()},
              {"domain_b", opts.domain_b.string()}};

  const gan::TrainResult result = gan::train(s.train, s.arch, a, b);

  ensure_parent(opts.out);
  const fs::path metrics = opts.metrics ? *opts.metrics : with_suffix(opts.out, ".metrics.csv");
  const std::pair<fs::path, const gan::WeightStore*> stores[] = {
      {opts.out, &result.g_ab},
      {with_suffix(opts.out, ".g_ba"), &result.g_ba},
      {with_suffix(opts.out, ".d_a"), &result.d_a},
      {with_suffix(opts.out, ".d_b"), &result.d_b},
  };
  for (const auto& [path, store] : stores) {
    data::write_bytes(path, gan::save_weights(*store));
    m.outputs.push_back(path.string());
  }
  ensure_parent(metrics);
  data::write_text(metrics, gan::metrics_csv(result.log));
  m.outputs.push_back(metrics.string());
  m.write(with_suffix(opts.out, ".manifest.json"));
  log << "trained " << result.log.size() << " step(s)";
  if (!result.log.empty()) {
    const auto& last = result.log.back();
    log << "; final loss_G " << last.loss_g << ", cycle " << last.cycle;
  }
  log << "\n";
}

void cmd_eval(const EvalOptions& opts, std::ostream& log, std::ostream& warn) {
  eval::EvalConfig cfg;
  try {
    cfg = eval::EvalConfig::from_protocol(opts.protocol);
  } catch (const Error& e) {
    fail(ErrorKind::kUsage, e.what());
  }
  if (!(opts.score_floor >= 0.0 && opts.score_floor <= 1.0)) {
    fail(ErrorKind::kUsage, "--score-floor must be in [0,1]");
  }
  cfg.score_floor = opts.score_floor;
  const auto& table = data::ClassTable::exdark();
  const data::DatasetIndex index = data::DatasetIndex::load(opts.gt_dir, table);
  for (const auto& w : index.warnings()) warn << "warning: " << w << "\n";

  data::DetectionSet dets;
  try {
    dets = data::parse_detections(data::read_text(opts.detections), table);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), opts.detections.string() + ": " + e.what());
  }
  for (const auto& w : dets.warnings) warn << "warning: " << w << "\n";

  const auto unknown = index.unknown_image_ids(dets.detections);
  if (!unknown.empty()) {
    std::string list;
    for (const auto& id : unknown) list += (list.empty() ? "" : ", ") + id;
    fail(ErrorKind::kValidation, "detections reference unknown image ids: " + list);
  }
  if (index.ground_truth().empty()) {
    fail(ErrorKind::kValidation, "no ground-truth boxes in " + opts.gt_dir.string());
  }

  const eval::EvalReport report = eval::evaluate(dets.detections, index.ground_truth(), cfg);
  const eval::ClassNamer namer = [&](int id) { return table.name(id); };
  ensure_parent(opts.out);
  data::write_text(opts.out, eval::report_json(report, namer));

  Manifest m;
  m.command = "eval";
  m.config = {{"protocol", opts.protocol}, {"score_floor", opts.score_floor}};
  m.inputs = {{"gt_dir", opts.gt_dir.string()}, {"detections", opts.detections.string()}};
  m.outputs.push_back(opts.out.string());
  if (opts.pr_csv) {
    ensure_parent(*opts.pr_csv);
    data::write_text(*opts.pr_csv, eval::pr_curve_csv(report, namer));
    m.outputs.push_back(opts.pr_csv->string());
  }
  if (report.undefined_ap_classes > 0) {
    warn << "warning: " << report.undefined_ap_classes
         << " class(es) have detections but no ground truth\n";
  }
  m.write(with_suffix(opts.out, ".manifest.json"));
  log << eval::summary_table(report, namer);
}

void cmd_report_hist(const ReportHistOptions& opts, std::ostream& log, std::ostream&) {
  RasterImage img = data::read_ppm_file(opts.in);
  if (opts.after_he) img = enhance_he(img);
  ensure_parent(opts.out);
  data::write_text(opts.out, histogram_csv(histogram_report(img)));
  Manifest m;
  m.command = "report-hist";
  m.config = {{"after_he", opts.after_he}};
  m.inputs = {{"in", opts.in.string()}};
  m.outputs.push_back(opts.out.string());
  m.write(with_suffix(opts.out, ".manifest.json"));
  log << "wrote " << opts.out.string() << "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-light image enhancement and detection evaluation", "lowlight"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  EnhanceOptions enh;
  std::string enh_weights, enh_arch;
  auto* enhance = app.add_subcommand("enhance", "Enhance every .ppm image in a directory");
  enhance->add_option("--method", enh.method, "he or cyclegan")
      ->required()
      ->check(CLI::IsMember({"he", "cyclegan"}));
  enhance->add_option("--in", enh.in_dir, "Input directory")->required();
  enhance->add_option("--out", enh.out_dir, "Output directory")->required();
  auto* w_opt = enhance->add_option("--weights", enh_weights, "Generator weights (cyclegan)");
  auto* a_opt = enhance->add_option("--arch", enh_arch, "resnet9 or unet256 (cyclegan)");
  enhance->add_option("--base", enh.base, "Generator base width")->capture_default_str();
  enhance->add_option("--blocks", enh.n_blocks, "ResNet blocks")->capture_default_str();
  enhance->add_option("--depth", enh.depth, "U-Net depth")->capture_default_str();
  enhance->add_flag("--hist", enh.hist, "Write before/after luma histograms");

  TrainOptions tr;
  std::string tr_metrics;
  auto* train = app.add_subcommand("train", "Train a CycleGAN on two image directories");
  train->add_option("--config", tr.config, "Key-value config file")->required();
  train->add_option("--domain-a", tr.domain_a, "Low-light images")->required();
  train->add_option("--domain-b", tr.domain_b, "Normally lit images")->required();
  train->add_option("--out", tr.out, "Output path of the A->B generator weights")->required();
  auto* m_opt = train->add_option("--metrics", tr_metrics, "Metric CSV path");

  EvalOptions ev;
  std::string ev_pr;
  auto* evalc = app.add_subcommand("eval", "Score detections against ground truth");
  evalc->add_option("--gt-dir", ev.gt_dir, "Directory of annotation .txt files")->required();
  evalc->add_option("--detections", ev.detections, "Detections JSON")->required();
  evalc->add_option("--protocol", ev.protocol, "voc50 or coco")->capture_default_str();
  evalc->add_option("--out", ev.out, "Report JSON path")->required();
  auto* pr_opt = evalc->add_option("--pr-csv", ev_pr, "PR curve CSV path");
  evalc->add_option("--score-floor", ev.score_floor, "Drop detections below this score")
      ->capture_default_str();

  ReportHistOptions rh;
  auto* hist = app.add_subcommand("report-hist", "Luma histogram of one image as CSV");
  hist->add_option("--in", rh.in, "Input .ppm")->required();
  hist->add_option("--out", rh.out, "Output CSV")->required();
  hist->add_flag("--after-he", rh.after_he, "Equalize before counting");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "lowlight: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (enhance->parsed()) {
      if (*w_opt) enh.weights = enh_weights;
      if (*a_opt) enh.arch = enh_arch;
      cmd_enhance(enh, out, err);
    } else if (train->parsed()) {
      if (*m_opt) tr.metrics = tr_metrics;
      cmd_train(tr, out, err);
    } else if (evalc->parsed()) {
      if (*pr_opt) ev.pr_csv = ev_pr;
      cmd_eval(ev, out, err);
    } else if (hist->parsed()) {
      cmd_report_hist(rh, out, err);
    }
  } catch (const Error& e) {
    err << "lowlight: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "lowlight: internal error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace lowlight::cli

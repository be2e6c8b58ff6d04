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
#ifndef LOWLIGHT_CLI_HPP_
#define LOWLIGHT_CLI_HPP_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lowlight/error.hpp"
#include "lowlight/gan/cyclegan.hpp"
#include "lowlight/gan/train.hpp"

namespace lowlight::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,      // I/O or internal error
  kExitUsage = 2,        // bad flags, bad config, missing inputs
  kExitParse = 3,        // unreadable annotation, detection or image file
  kExitValidation = 4,   // inputs parse but are inconsistent
  kExitIncompatible = 5  // weights do not fit the requested architecture
};

int exit_code(ErrorKind kind);

struct TrainSettings {
  gan::TrainConfig train;
  gan::ArchConfig arch;
};

// `key = value` per line, `#` starts a comment. Unknown keys, duplicates and
// bad values raise Error(kUsage) naming the key and line.
TrainSettings parse_train_config(std::string_view text);
// Canonical `key = value` listing of every setting.
std::string config_text(const TrainSettings& settings);

struct EnhanceOptions {
  std::string method;  // "he" or "cyclegan"
  std::filesystem::path in_dir;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> weights;
  std::optional<std::string> arch;
  std::size_t base = 8;
  std::size_t n_blocks = 2;
  std::size_t depth = 2;
  bool hist = false;
};

struct TrainOptions {
  std::filesystem::path config;
  std::filesystem::path domain_a;
  std::filesystem::path domain_b;
  std::filesystem::path out;  // G_AB weights; siblings get suffixes
  std::optional<std::filesystem::path> metrics;
};

struct EvalOptions {
  std::filesystem::path gt_dir;
  std::filesystem::path detections;
  std::string protocol = "voc50";
  std::filesystem::path out;
  std::optional<std::filesystem::path> pr_csv;
  double score_floor = 0.0;
};

struct ReportHistOptions {
  std::filesystem::path in;
  std::filesystem::path out;
  bool after_he = false;
};

// Each command throws Error on failure and writes a `*.manifest.json` on
// success. `log` receives the human-readable summary, `warn` the warnings.
void cmd_enhance(const EnhanceOptions& opts, std::ostream& log, std::ostream& warn);
void cmd_train(const TrainOptions& opts, std::ostream& log, std::ostream& warn);
void cmd_eval(const EvalOptions& opts, std::ostream& log, std::ostream& warn);
void cmd_report_hist(const ReportHistOptions& opts, std::ostream& log,
                     std::ostream& warn);

// Parses argv, runs the subcommand and maps errors to an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lowlight::cli

#endif  // LOWLIGHT_CLI_HPP_

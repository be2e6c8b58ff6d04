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
#ifndef LOWLIGHT_TESTS_TEST_UTIL_HPP_
#define LOWLIGHT_TESTS_TEST_UTIL_HPP_

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>

#include "lowlight/pixelops.hpp"
#include "lowlight/rng.hpp"
#include "lowlight/tensor.hpp"

namespace lowlight::testing {

inline std::filesystem::path data_dir() { return LOWLIGHT_TEST_DATA; }

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("lowlight_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

inline Tensor random_tensor(const Shape& shape, Rng& rng, double sd = 1.0) {
  Tensor t(shape);
  for (double& v : t.data()) v = rng.normal() * sd;
  return t;
}

inline RasterImage random_image(std::size_t w, std::size_t h, std::size_t c, Rng& rng) {
  std::vector<std::uint8_t> px(w * h * c);
  for (auto& v : px) v = static_cast<std::uint8_t>(rng.uniform_index(256));
  return RasterImage(w, h, c, std::move(px));
}

}  // namespace lowlight::testing

#endif  // LOWLIGHT_TESTS_TEST_UTIL_HPP_

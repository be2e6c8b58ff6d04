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
#ifndef LOWLIGHT_RNG_HPP_
#define LOWLIGHT_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace lowlight {

// Seeded random stream. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the distribution transforms are implemented here
// because the std:: distributions differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  // Standard normal via Box-Muller; one draw per call (the second value of
  // each pair is discarded so the stream position is easy to reason about).
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Derives an independent child seed; used to give each subsystem its own
  // stream without coupling draw orders.
  std::uint64_t fork_seed() { return engine_() ^ 0x9e3779b97f4a7c15ULL; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lowlight

#endif  // LOWLIGHT_RNG_HPP_

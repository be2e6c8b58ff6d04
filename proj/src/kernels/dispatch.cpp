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
#include <atomic>

#include "lowlight/error.hpp"
#include "lowlight/kernels.hpp"

namespace lowlight::kernels {
namespace {

const KernelTable* best_table() {
#if defined(LOWLIGHT_HAVE_AVX2)
  if (supported(Isa::kAvx2)) return &detail::kAvx2Table;
#endif
#if defined(LOWLIGHT_HAVE_NEON)
  return &detail::kNeonTable;
#endif
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{best_table()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(LOWLIGHT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(LOWLIGHT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
    if (supported(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) {
    fail(ErrorKind::kInvalidInput,
         "kernel variant not available: " + std::string(to_string(isa)));
  }
  switch (isa) {
#if defined(LOWLIGHT_HAVE_AVX2)
    case Isa::kAvx2: return detail::kAvx2Table;
#endif
#if defined(LOWLIGHT_HAVE_NEON)
    case Isa::kNeon: return detail::kNeonTable;
#endif
    default: return detail::kScalarTable;
  }
}

const KernelTable& active() {
  return *active_slot().load(std::memory_order_acquire);
}

void set_active(Isa isa) {
  active_slot().store(&table(isa), std::memory_order_release);
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(active().isa) { set_active(isa); }

ScopedIsa::~ScopedIsa() { set_active(previous_); }

}  // namespace lowlight::kernels

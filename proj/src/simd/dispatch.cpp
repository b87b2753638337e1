// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include <cstdlib>
#include <string>

#include "kgpf/error.hpp"
#include "kgpf/simd/kernels.hpp"

namespace kgpf::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "?";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(KGPF_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(KGPF_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (auto isa : {Isa::scalar, Isa::avx2, Isa::neon})
    if (supported(isa)) out.push_back(isa);
  return out;
}

const Kernels& kernels(Isa isa) {
  static const Kernels scalar_table{scalar::weighted_sum, scalar::count_nonfinite};
#if defined(KGPF_HAVE_AVX2)
  static const Kernels avx2_table{avx2::weighted_sum, avx2::count_nonfinite};
#endif
#if defined(KGPF_HAVE_NEON)
  static const Kernels neon_table{neon::weighted_sum, neon::count_nonfinite};
#endif
  if (!supported(isa)) throw UsageError("SIMD variant " + std::string(to_string(isa)) + " is not supported here");
  switch (isa) {
#if defined(KGPF_HAVE_AVX2)
    case Isa::avx2:
      return avx2_table;
#endif
#if defined(KGPF_HAVE_NEON)
    case Isa::neon:
      return neon_table;
#endif
    default:
      return scalar_table;
  }
}

Isa active_isa() {
  static const Isa chosen = [] {
    if (const char* env = std::getenv("KGPF_SIMD")) {
      for (auto isa : {Isa::scalar, Isa::avx2, Isa::neon})
        if (to_string(isa) == env && supported(isa)) return isa;
    }
    const auto all = available_isas();
    return all.back();
  }();
  return chosen;
}

const Kernels& active() { return kernels(active_isa()); }

}  // namespace kgpf::simd

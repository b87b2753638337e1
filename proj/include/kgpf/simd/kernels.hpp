// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace kgpf::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

/// Element kernels behind the merge and tensor-validation paths. Every variant
/// produces bit-identical results to the scalar reference.
struct Kernels {
  /// out[i] = float(wa * double(a[i]) + wb * double(b[i])); no fused multiply-add.
  void (*weighted_sum)(const float* a, const float* b, float* out, std::size_t n, double wa, double wb);
  /// Number of NaN or infinite values.
  std::size_t (*count_nonfinite)(const float* data, std::size_t n);
};

namespace scalar {
void weighted_sum(const float* a, const float* b, float* out, std::size_t n, double wa, double wb);
std::size_t count_nonfinite(const float* data, std::size_t n);
}  // namespace scalar

#if defined(KGPF_HAVE_AVX2)
namespace avx2 {
void weighted_sum(const float* a, const float* b, float* out, std::size_t n, double wa, double wb);
std::size_t count_nonfinite(const float* data, std::size_t n);
}  // namespace avx2
#endif

#if defined(KGPF_HAVE_NEON)
namespace neon {
void weighted_sum(const float* a, const float* b, float* out, std::size_t n, double wa, double wb);
std::size_t count_nonfinite(const float* data, std::size_t n);
}  // namespace neon
#endif

/// Compiled in and supported by the running CPU.
bool supported(Isa isa);

/// Supported variants, scalar first.
std::vector<Isa> available_isas();

/// Throws kgpf::UsageError if `isa` is not supported.
const Kernels& kernels(Isa isa);

/// Best supported variant, unless KGPF_SIMD=scalar|avx2|neon selects one explicitly.
Isa active_isa();
const Kernels& active();

}  // namespace kgpf::simd

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include <cstdint>
#include <cstring>

#include "kgpf/simd/kernels.hpp"

namespace kgpf::simd::scalar {

void weighted_sum(const float* a, const float* b, float* out, std::size_t n, double wa, double wb) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = wa * static_cast<double>(a[i]);
    const double y = wb * static_cast<double>(b[i]);
    out[i] = static_cast<float>(x + y);
  }
}

std::size_t count_nonfinite(const float* data, std::size_t n) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, data + i, sizeof bits);
    bad += (bits & 0x7f800000u) == 0x7f800000u;
  }
  return bad;
}

}  // namespace kgpf::simd::scalar

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include <immintrin.h>

#include "kgpf/simd/kernels.hpp"

namespace kgpf::simd::avx2 {

void weighted_sum(const float* a, const float* b, float* out, std::size_t n, double wa, double wb) {
  const __m256d va_w = _mm256_set1_pd(wa);
  const __m256d vb_w = _mm256_set1_pd(wb);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 fa = _mm256_loadu_ps(a + i);
    const __m256 fb = _mm256_loadu_ps(b + i);
    const __m256d a_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(fa));
    const __m256d a_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(fa, 1));
    const __m256d b_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(fb));
    const __m256d b_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(fb, 1));
    const __m256d lo = _mm256_add_pd(_mm256_mul_pd(va_w, a_lo), _mm256_mul_pd(vb_w, b_lo));
    const __m256d hi = _mm256_add_pd(_mm256_mul_pd(va_w, a_hi), _mm256_mul_pd(vb_w, b_hi));
    const __m256 res = _mm256_set_m128(_mm256_cvtpd_ps(hi), _mm256_cvtpd_ps(lo));
    _mm256_storeu_ps(out + i, res);
  }
  scalar::weighted_sum(a + i, b + i, out + i, n - i, wa, wb);
}

std::size_t count_nonfinite(const float* data, std::size_t n) {
  const __m256i exp_mask = _mm256_set1_epi32(0x7f800000);
  std::size_t bad = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i bits = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    const __m256i hit = _mm256_cmpeq_epi32(_mm256_and_si256(bits, exp_mask), exp_mask);
    bad += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_ps(_mm256_castsi256_ps(hit))));
  }
  return bad + scalar::count_nonfinite(data + i, n - i);
}

}  // namespace kgpf::simd::avx2

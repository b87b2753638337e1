// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include <arm_neon.h>

#include "kgpf/simd/kernels.hpp"

namespace kgpf::simd::neon {

void weighted_sum(const float* a, const float* b, float* out, std::size_t n, double wa, double wb) {
  const float64x2_t va_w = vdupq_n_f64(wa);
  const float64x2_t vb_w = vdupq_n_f64(wb);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t fa = vld1q_f32(a + i);
    const float32x4_t fb = vld1q_f32(b + i);
    const float64x2_t lo = vaddq_f64(vmulq_f64(va_w, vcvt_f64_f32(vget_low_f32(fa))),
                                     vmulq_f64(vb_w, vcvt_f64_f32(vget_low_f32(fb))));
    const float64x2_t hi = vaddq_f64(vmulq_f64(va_w, vcvt_high_f64_f32(fa)), vmulq_f64(vb_w, vcvt_high_f64_f32(fb)));
    vst1q_f32(out + i, vcvt_high_f32_f64(vcvt_f32_f64(lo), hi));
  }
  scalar::weighted_sum(a + i, b + i, out + i, n - i, wa, wb);
}

std::size_t count_nonfinite(const float* data, std::size_t n) {
  const uint32x4_t exp_mask = vdupq_n_u32(0x7f800000u);
  std::size_t bad = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const uint32x4_t bits = vreinterpretq_u32_f32(vld1q_f32(data + i));
    const uint32x4_t hit = vceqq_u32(vandq_u32(bits, exp_mask), exp_mask);
    bad += vaddvq_u32(vshrq_n_u32(hit, 31));
  }
  return bad + scalar::count_nonfinite(data + i, n - i);
}

}  // namespace kgpf::simd::neon

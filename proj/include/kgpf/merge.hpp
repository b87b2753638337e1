// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "kgpf/simd/kernels.hpp"
#include "kgpf/tensor_bundle.hpp"

namespace kgpf {

inline constexpr double kDefaultMergeLambda = 0.7;

struct MergeOptions {
  /// Tensors whose name fully matches one of these are copied from `a` unmerged.
  std::vector<std::regex> exclude;
  /// Kernel variant; defaults to the runtime-selected one.
  std::optional<simd::Isa> isa;
};

/// Element-wise lambda * a + (1 - lambda) * b computed in double and stored as float.
/// lambda == 1 returns a and lambda == 0 returns b bit-for-bit.
/// Throws SchemaError on name-set or shape mismatch, UsageError for lambda outside [0, 1].
TensorBundle weighted_merge(const TensorBundle& a, const TensorBundle& b, double lambda,
                            const MergeOptions& opts = {});

/// Simple average: weighted_merge(sft, rm, 0.5).
TensorBundle doge_merge(const TensorBundle& sft, const TensorBundle& rm, const MergeOptions& opts = {});

/// "0.7 a + 0.3 b" style label for output metadata.
std::string merge_label(double lambda, const std::string& a_name, const std::string& b_name);

}  // namespace kgpf

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgpf/objective.hpp"

namespace kgpf {

struct GradCheckReport {
  std::string op;
  double max_rel_err = 0.0;
  std::size_t worst_index = 0;
  bool pass = true;
  std::size_t checks = 0;  // loss/policy configurations compared
  std::string failure;     // set on non-finite loss or injected-fault style failures

  std::string to_json() const;
};

using LossFn = std::function<LossValue(const ToyPolicy&)>;

inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kGradCheckTol = 1e-4;
inline constexpr double kGradCheckAbsFloor = 1e-8;

/// Central differences over every logit against the analytic gradient. The error per entry is
/// |a - n| / max(|a|, |n|), or |a - n| when both magnitudes are below 1e-8.
GradCheckReport finite_diff_gradcheck(const LossFn& loss_fn, const ToyPolicy& policy, double h = kGradCheckStep,
                                      double tol = kGradCheckTol, std::string_view op = "custom");

/// Options for the built-in randomized checks.
struct GradCheckSuite {
  std::size_t seeds = 20;
  double tol = kGradCheckTol;
  double h = kGradCheckStep;
  std::optional<double> beta;  // DPO/GRPO beta override
  std::vector<std::size_t> vocab_sizes{2, 4, 8};
  std::vector<std::size_t> context_counts{1, 3};
  std::uint64_t root_seed = 0;
};

/// Names accepted by run_gradcheck.
const std::vector<std::string>& gradcheck_ops();

/// Runs `op` ("sft", "dpo", "grpo", "dss") on random policies and batches for every
/// (seed, vocab, contexts) combination and merges the results. Throws UsageError for unknown ops.
GradCheckReport run_gradcheck(std::string_view op, const GradCheckSuite& suite = {});

/// Random policy with N(0, scale^2) logits.
ToyPolicy random_policy(std::size_t contexts, std::size_t vocab, std::uint64_t seed, double scale = 1.0);

}  // namespace kgpf

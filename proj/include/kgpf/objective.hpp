// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace kgpf {

/// Categorical sequence policy: one softmax row of logits per context index.
/// The probability of a trajectory is the product of its per-step token probabilities.
class ToyPolicy {
 public:
  ToyPolicy(std::size_t contexts, std::size_t vocab);  // all-zero logits (uniform)
  ToyPolicy(std::size_t contexts, std::size_t vocab, std::vector<double> logits);

  std::size_t contexts() const { return contexts_; }
  std::size_t vocab() const { return vocab_; }
  std::size_t size() const { return logits_.size(); }

  std::span<const double> logits() const { return logits_; }
  std::span<double> logits() { return logits_; }
  std::span<const double> row(std::size_t context) const { return {logits_.data() + context * vocab_, vocab_}; }
  double& at(std::size_t context, std::size_t token) { return logits_[context * vocab_ + token]; }

  /// Stable log-softmax of every row, same layout as logits().
  std::vector<double> log_probs() const;

 private:
  std::size_t contexts_;
  std::size_t vocab_;
  std::vector<double> logits_;
};

struct Trajectory {
  std::vector<std::size_t> context_ids;
  std::vector<std::size_t> token_ids;
  std::optional<double> reward;

  std::size_t size() const { return token_ids.size(); }
};

struct Group {
  std::vector<Trajectory> trajectories;
  std::vector<double> advantages;
};

struct LossValue {
  double value = 0.0;
  std::vector<double> gradient;  // d value / d logits, row-major
};

struct HyperParams {
  double beta = 0.0;
  double epsilon = 0.2;
  double alpha_path = 0.5;
  double alpha_rationale = 0.5;

  void validate() const;  // throws UsageError
};

/// Throws UsageError if lengths differ, the trajectory is empty, or an index is out of range.
void check_trajectory(const ToyPolicy& policy, const Trajectory& traj);

double sequence_log_prob(const ToyPolicy& policy, const Trajectory& traj);

/// Negative summed log-likelihood of each trajectory's tokens; `mean` divides by batch size.
LossValue sft_loss(const ToyPolicy& policy, std::span<const Trajectory> batch, bool mean = false);

/// -log sigmoid(beta * ((log pi(w) - log ref(w)) - (log pi(l) - log ref(l)))). Reference is frozen.
LossValue dpo_loss(const ToyPolicy& policy, const ToyPolicy& ref, const Trajectory& chosen,
                   const Trajectory& rejected, double beta);

inline constexpr double kAdvantageEps = 1e-8;

/// (r - mean) / max(population std, 1e-8). Requires at least two rewards.
std::vector<double> group_advantages(std::span<const double> rewards);

/// Fills advantages from the trajectories' rewards.
void score_group(Group& group);

/// min(ratio * adv, clip(ratio, 1 - eps, 1 + eps) * adv).
double clipped_surrogate(double ratio, double advantage, double epsilon);

/// k3 = r - ln r - 1 with r = pi_ref / pi_theta; >= 0, zero iff r == 1.
double kl_k3(double log_ref_minus_log_policy);

/// Exact KL(policy || ref) of one context's categorical distribution.
double categorical_kl(const ToyPolicy& policy, const ToyPolicy& ref, std::size_t context);

/// Negated clipped-surrogate objective with k3 KL penalty, normalized by 1/|o_i| per
/// trajectory, 1/G per group, and averaged over groups.
LossValue grpo_loss(const ToyPolicy& policy, const ToyPolicy& old_policy, const ToyPolicy& ref_policy,
                    std::span<const Group> groups, const HyperParams& hp);

/// 1 iff normalized prediction equals gold; 0 otherwise.
double rule_reward(std::string_view prediction, std::string_view gold);

/// +1 if the predicted label matches, -1 otherwise.
double rm_r1_reward(std::string_view predicted_label, std::string_view gold_label);

/// alpha_path * SFT(path) + alpha_rationale * SFT(rationale).
LossValue dss_loss(const ToyPolicy& policy, std::span<const Trajectory> path_batch,
                   std::span<const Trajectory> rationale_batch, const HyperParams& hp);

}  // namespace kgpf

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgpf/error.hpp"
#include "kgpf/text.hpp"

namespace kgpf {

ToyPolicy::ToyPolicy(std::size_t contexts, std::size_t vocab)
    : ToyPolicy(contexts, vocab, std::vector<double>(contexts * vocab, 0.0)) {}

ToyPolicy::ToyPolicy(std::size_t contexts, std::size_t vocab, std::vector<double> logits)
    : contexts_(contexts), vocab_(vocab), logits_(std::move(logits)) {
  if (contexts == 0 || vocab == 0) throw UsageError("policy needs at least one context and one token");
  if (logits_.size() != contexts * vocab) throw UsageError("logit count does not match contexts x vocab");
}

std::vector<double> ToyPolicy::log_probs() const {
  std::vector<double> out(logits_.size());
  for (std::size_t c = 0; c < contexts_; ++c) {
    const auto r = row(c);
    const double mx = *std::max_element(r.begin(), r.end());
    double sum = 0.0;
    for (double v : r) sum += std::exp(v - mx);
    const double lse = mx + std::log(sum);
    for (std::size_t k = 0; k < vocab_; ++k) out[c * vocab_ + k] = r[k] - lse;
  }
  return out;
}

void HyperParams::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw UsageError("beta must be a finite value >= 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError("epsilon must be in (0, 1)");
  if (alpha_path < 0.0 || alpha_rationale < 0.0 || std::abs(alpha_path + alpha_rationale - 1.0) > 1e-12)
    throw UsageError("mixture weights must be nonnegative and sum to 1");
}

void check_trajectory(const ToyPolicy& policy, const Trajectory& traj) {
  if (traj.token_ids.empty()) throw UsageError("trajectory must have at least one token");
  if (traj.token_ids.size() != traj.context_ids.size())
    throw UsageError("trajectory context and token lengths differ");
  for (std::size_t t = 0; t < traj.size(); ++t) {
    if (traj.context_ids[t] >= policy.contexts() || traj.token_ids[t] >= policy.vocab())
      throw UsageError("trajectory index out of range at step " + std::to_string(t));
  }
}

namespace {

double log_prob_cached(const std::vector<double>& lp, std::size_t vocab, const Trajectory& traj) {
  double s = 0.0;
  for (std::size_t t = 0; t < traj.size(); ++t) s += lp[traj.context_ids[t] * vocab + traj.token_ids[t]];
  return s;
}

/// grad += scale * d log pi(token | context) / d logits.
void add_token_grad(const std::vector<double>& lp, std::size_t vocab, std::size_t context, std::size_t token,
                    double scale, std::vector<double>& grad) {
  const std::size_t base = context * vocab;
  for (std::size_t k = 0; k < vocab; ++k) grad[base + k] -= scale * std::exp(lp[base + k]);
  grad[base + token] += scale;
}

void add_sequence_grad(const std::vector<double>& lp, std::size_t vocab, const Trajectory& traj, double scale,
                       std::vector<double>& grad) {
  for (std::size_t t = 0; t < traj.size(); ++t)
    add_token_grad(lp, vocab, traj.context_ids[t], traj.token_ids[t], scale, grad);
}

// -log(sigmoid(x)) without overflow.
double neg_log_sigmoid(double x) { return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double sequence_log_prob(const ToyPolicy& policy, const Trajectory& traj) {
  check_trajectory(policy, traj);
  return log_prob_cached(policy.log_probs(), policy.vocab(), traj);
}

LossValue sft_loss(const ToyPolicy& policy, std::span<const Trajectory> batch, bool mean) {
  if (batch.empty()) throw UsageError("sft batch must be non-empty");
  const auto lp = policy.log_probs();
  const double scale = mean ? 1.0 / static_cast<double>(batch.size()) : 1.0;
  LossValue out{0.0, std::vector<double>(policy.size(), 0.0)};
  for (const auto& traj : batch) {
    check_trajectory(policy, traj);
    out.value -= scale * log_prob_cached(lp, policy.vocab(), traj);
    add_sequence_grad(lp, policy.vocab(), traj, -scale, out.gradient);
  }
  return out;
}

LossValue dpo_loss(const ToyPolicy& policy, const ToyPolicy& ref, const Trajectory& chosen,
                   const Trajectory& rejected, double beta) {
  if (ref.contexts() != policy.contexts() || ref.vocab() != policy.vocab())
    throw UsageError("reference policy shape differs from policy");
  if (!(beta >= 0.0)) throw UsageError("beta must be >= 0");
  check_trajectory(policy, chosen);
  check_trajectory(policy, rejected);
  if (chosen.token_ids == rejected.token_ids && chosen.context_ids == rejected.context_ids)
    throw UsageError("chosen and rejected trajectories are identical");

  const auto lp = policy.log_probs();
  const auto lr = ref.log_probs();
  const auto v = policy.vocab();
  const double chosen_ratio = log_prob_cached(lp, v, chosen) - log_prob_cached(lr, v, chosen);
  const double rejected_ratio = log_prob_cached(lp, v, rejected) - log_prob_cached(lr, v, rejected);
  const double margin = beta * (chosen_ratio - rejected_ratio);

  LossValue out{neg_log_sigmoid(margin), std::vector<double>(policy.size(), 0.0)};
  // d/dm of -log sigmoid(m) = -sigmoid(-m).
  const double coeff = -sigmoid(-margin) * beta;
  if (coeff != 0.0) {
    add_sequence_grad(lp, v, chosen, coeff, out.gradient);
    add_sequence_grad(lp, v, rejected, -coeff, out.gradient);
  }
  return out;
}

std::vector<double> group_advantages(std::span<const double> rewards) {
  if (rewards.size() < 2) throw UsageError("group advantages need at least two rewards");
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double denom = std::max(std::sqrt(var / n), kAdvantageEps);
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards) out.push_back((r - mean) / denom);
  return out;
}

void score_group(Group& group) {
  std::vector<double> rewards;
  for (const auto& t : group.trajectories) {
    if (!t.reward) throw UsageError("trajectory in group has no reward");
    rewards.push_back(*t.reward);
  }
  group.advantages = group_advantages(rewards);
}

double clipped_surrogate(double ratio, double advantage, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double kl_k3(double log_ref_minus_log_policy) {
  // expm1 keeps r - 1 - ln r accurate near r = 1.
  return std::expm1(log_ref_minus_log_policy) - log_ref_minus_log_policy;
}

double categorical_kl(const ToyPolicy& policy, const ToyPolicy& ref, std::size_t context) {
  const auto lp = policy.log_probs();
  const auto lr = ref.log_probs();
  const auto base = context * policy.vocab();
  double kl = 0.0;
  for (std::size_t k = 0; k < policy.vocab(); ++k) {
    const double p = std::exp(lp[base + k]);
    kl += p * (lp[base + k] - lr[base + k]);
  }
  return kl;
}

LossValue grpo_loss(const ToyPolicy& policy, const ToyPolicy& old_policy, const ToyPolicy& ref_policy,
                    std::span<const Group> groups, const HyperParams& hp) {
  hp.validate();
  if (groups.empty()) throw UsageError("grpo needs at least one group");
  for (const auto* other : {&old_policy, &ref_policy}) {
    if (other->contexts() != policy.contexts() || other->vocab() != policy.vocab())
      throw UsageError("old/reference policy shape differs from policy");
  }
  const auto lp = policy.log_probs();
  const auto lo = old_policy.log_probs();
  const auto lr = ref_policy.log_probs();
  const auto v = policy.vocab();

  LossValue out{0.0, std::vector<double>(policy.size(), 0.0)};
  const double group_w = 1.0 / static_cast<double>(groups.size());
  for (const auto& g : groups) {
    const auto G = g.trajectories.size();
    if (G < 2) throw UsageError("grpo group needs at least two trajectories");
    if (g.advantages.size() != G) throw UsageError("grpo group advantages not computed");
    for (std::size_t i = 0; i < G; ++i) {
      const auto& traj = g.trajectories[i];
      check_trajectory(policy, traj);
      const double w = group_w / static_cast<double>(G) / static_cast<double>(traj.size());
      const double adv = g.advantages[i];
      for (std::size_t t = 0; t < traj.size(); ++t) {
        const auto idx = traj.context_ids[t] * v + traj.token_ids[t];
        const double ratio = std::exp(lp[idx] - lo[idx]);
        const double unclipped = ratio * adv;
        const double surrogate = clipped_surrogate(ratio, adv, hp.epsilon);
        const double log_r = lr[idx] - lp[idx];
        const double k3 = kl_k3(log_r);
        out.value -= w * (surrogate - hp.beta * k3);

        // d surrogate = adv * ratio * dlp on the unclipped branch, 0 when the clip is active.
        const double d_surrogate = unclipped <= surrogate ? adv * ratio : 0.0;
        // d k3 = (1 - r) * dlp with r = exp(log_r).
        const double d_k3 = -std::expm1(log_r);
        const double coeff = -w * (d_surrogate - hp.beta * d_k3);
        if (coeff != 0.0) add_token_grad(lp, v, traj.context_ids[t], traj.token_ids[t], coeff, out.gradient);
      }
    }
  }
  return out;
}

double rule_reward(std::string_view prediction, std::string_view gold) {
  return fold_trim(prediction) == fold_trim(gold) ? 1.0 : 0.0;
}

double rm_r1_reward(std::string_view predicted_label, std::string_view gold_label) {
  return fold_trim(predicted_label) == fold_trim(gold_label) ? 1.0 : -1.0;
}

LossValue dss_loss(const ToyPolicy& policy, std::span<const Trajectory> path_batch,
                   std::span<const Trajectory> rationale_batch, const HyperParams& hp) {
  hp.validate();
  const auto path = sft_loss(policy, path_batch);
  const auto rationale = sft_loss(policy, rationale_batch);
  LossValue out{hp.alpha_path * path.value + hp.alpha_rationale * rationale.value,
                std::vector<double>(policy.size(), 0.0)};
  for (std::size_t k = 0; k < out.gradient.size(); ++k)
    out.gradient[k] = hp.alpha_path * path.gradient[k] + hp.alpha_rationale * rationale.gradient[k];
  return out;
}

}  // namespace kgpf

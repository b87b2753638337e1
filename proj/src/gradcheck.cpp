// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "kgpf/error.hpp"
#include "kgpf/rng.hpp"

namespace kgpf {

std::string GradCheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["op"] = op;
  j["max_rel_err"] = max_rel_err;
  j["worst_index"] = worst_index;
  j["pass"] = pass;
  j["checks"] = checks;
  if (!failure.empty()) j["failure"] = failure;
  return j.dump(2);
}

GradCheckReport finite_diff_gradcheck(const LossFn& loss_fn, const ToyPolicy& policy, double h, double tol,
                                      std::string_view op) {
  if (!(h > 0.0)) throw UsageError("gradcheck step must be > 0");
  GradCheckReport rep;
  rep.op = std::string(op);
  rep.checks = 1;

  const auto analytic = loss_fn(policy);
  if (!std::isfinite(analytic.value)) {
    rep.pass = false;
    rep.failure = "non-finite loss at unperturbed policy";
    return rep;
  }
  if (analytic.gradient.size() != policy.size()) throw InvariantError("gradient length differs from policy size");

  ToyPolicy probe = policy;
  for (std::size_t k = 0; k < policy.size(); ++k) {
    const double orig = probe.logits()[k];
    probe.logits()[k] = orig + h;
    const double up = loss_fn(probe).value;
    probe.logits()[k] = orig - h;
    const double down = loss_fn(probe).value;
    probe.logits()[k] = orig;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      rep.pass = false;
      rep.worst_index = k;
      rep.failure = "non-finite loss when perturbing logit " + std::to_string(k);
      return rep;
    }
    const double numeric = (up - down) / (2.0 * h);
    const double a = analytic.gradient[k];
    const double mag = std::max(std::abs(a), std::abs(numeric));
    const double err = mag < kGradCheckAbsFloor ? std::abs(a - numeric) : std::abs(a - numeric) / mag;
    if (err > rep.max_rel_err) {
      rep.max_rel_err = err;
      rep.worst_index = k;
    }
  }
  rep.pass = rep.max_rel_err <= tol;
  if (!rep.pass)
    rep.failure = "gradient entry " + std::to_string(rep.worst_index) + " has relative error " +
                  std::to_string(rep.max_rel_err);
  return rep;
}

ToyPolicy random_policy(std::size_t contexts, std::size_t vocab, std::uint64_t seed, double scale) {
  Rng rng(seed);
  std::vector<double> logits(contexts * vocab);
  for (auto& v : logits) v = scale * rng.normal();
  return ToyPolicy(contexts, vocab, std::move(logits));
}

const std::vector<std::string>& gradcheck_ops() {
  static const std::vector<std::string> ops{"sft", "dpo", "grpo", "dss"};
  return ops;
}

namespace {

Trajectory random_trajectory(Rng& rng, std::size_t contexts, std::size_t vocab, std::size_t max_len) {
  Trajectory t;
  const auto len = 1 + static_cast<std::size_t>(rng.below(max_len));
  for (std::size_t i = 0; i < len; ++i) {
    t.context_ids.push_back(static_cast<std::size_t>(rng.below(contexts)));
    t.token_ids.push_back(static_cast<std::size_t>(rng.below(vocab)));
  }
  return t;
}

std::vector<Trajectory> random_batch(Rng& rng, std::size_t contexts, std::size_t vocab, std::size_t n) {
  std::vector<Trajectory> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_trajectory(rng, contexts, vocab, 4));
  return out;
}

void merge_into(GradCheckReport& total, const GradCheckReport& one) {
  total.checks += one.checks;
  if (one.max_rel_err > total.max_rel_err || (!one.pass && total.pass)) {
    total.max_rel_err = std::max(total.max_rel_err, one.max_rel_err);
    total.worst_index = one.worst_index;
  }
  if (!one.pass && total.pass) {
    total.pass = false;
    total.failure = one.failure;
  }
}

GradCheckReport check_one(std::string_view op, std::size_t contexts, std::size_t vocab, std::uint64_t seed,
                          const GradCheckSuite& suite) {
  Rng rng(seed);
  const auto policy = random_policy(contexts, vocab, rng.next());
  if (op == "sft") {
    const auto batch = random_batch(rng, contexts, vocab, 3);
    return finite_diff_gradcheck([&](const ToyPolicy& p) { return sft_loss(p, batch); }, policy, suite.h, suite.tol,
                                 op);
  }
  if (op == "dpo") {
    const auto ref = random_policy(contexts, vocab, rng.next());
    const auto chosen = random_trajectory(rng, contexts, vocab, 4);
    auto rejected = random_trajectory(rng, contexts, vocab, 4);
    while (rejected.token_ids == chosen.token_ids && rejected.context_ids == chosen.context_ids)
      rejected = random_trajectory(rng, contexts, vocab, 4);
    const double beta = suite.beta.value_or(0.1 + 1.9 * rng.uniform());
    return finite_diff_gradcheck([&](const ToyPolicy& p) { return dpo_loss(p, ref, chosen, rejected, beta); },
                                 policy, suite.h, suite.tol, op);
  }
  if (op == "grpo") {
    // Old policy near the current one so some ratios land inside and some outside the clip range.
    std::vector<double> old_logits(policy.logits().begin(), policy.logits().end());
    for (auto& v : old_logits) v += 0.3 * rng.normal();
    const ToyPolicy old_policy(contexts, vocab, std::move(old_logits));
    const auto ref = random_policy(contexts, vocab, rng.next());
    HyperParams hp;
    hp.beta = suite.beta.value_or(0.04 + 0.5 * rng.uniform());
    std::vector<Group> groups(2);
    for (auto& g : groups) {
      g.trajectories = random_batch(rng, contexts, vocab, 4);
      for (auto& t : g.trajectories) t.reward = static_cast<double>(rng.below(2));
      score_group(g);
    }
    return finite_diff_gradcheck([&](const ToyPolicy& p) { return grpo_loss(p, old_policy, ref, groups, hp); },
                                 policy, suite.h, suite.tol, op);
  }
  if (op == "dss") {
    const auto path = random_batch(rng, contexts, vocab, 2);
    const auto rationale = random_batch(rng, contexts, vocab, 3);
    HyperParams hp;
    hp.alpha_path = rng.uniform();
    hp.alpha_rationale = 1.0 - hp.alpha_path;
    return finite_diff_gradcheck([&](const ToyPolicy& p) { return dss_loss(p, path, rationale, hp); }, policy,
                                 suite.h, suite.tol, op);
  }
  throw UsageError("unknown gradcheck op '" + std::string(op) + "' (expected sft|dpo|grpo|dss)");
}

}  // namespace

GradCheckReport run_gradcheck(std::string_view op, const GradCheckSuite& suite) {
  if (std::find(gradcheck_ops().begin(), gradcheck_ops().end(), op) == gradcheck_ops().end())
    throw UsageError("unknown gradcheck op '" + std::string(op) + "' (expected sft|dpo|grpo|dss)");
  GradCheckReport total;
  total.op = std::string(op);
  total.checks = 0;
  for (std::size_t s = 0; s < suite.seeds; ++s) {
    for (auto vocab : suite.vocab_sizes) {
      for (auto contexts : suite.context_counts) {
        const auto seed = derive_seed(suite.root_seed, op,
                                      std::to_string(s) + "/" + std::to_string(vocab) + "/" + std::to_string(contexts));
        merge_into(total, check_one(op, contexts, vocab, seed, suite));
      }
    }
  }
  return total;
}

}  // namespace kgpf

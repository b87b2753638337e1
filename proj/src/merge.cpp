// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/merge.hpp"

#include <cstdio>

#include "kgpf/error.hpp"

namespace kgpf {
namespace {

void check_schemas(const TensorBundle& a, const TensorBundle& b) {
  std::string only_a, only_b;
  for (const auto& [name, _] : a.tensors)
    if (!b.tensors.contains(name)) only_a += (only_a.empty() ? "" : ", ") + name;
  for (const auto& [name, _] : b.tensors)
    if (!a.tensors.contains(name)) only_b += (only_b.empty() ? "" : ", ") + name;
  if (!only_a.empty() || !only_b.empty())
    throw SchemaError("tensor name sets differ; only in first: [" + only_a + "], only in second: [" + only_b + "]");
  for (const auto& [name, ta] : a.tensors) {
    if (ta.shape != b.tensors.at(name).shape) throw SchemaError("shape mismatch for tensor " + name);
  }
}

bool excluded(const std::string& name, const MergeOptions& opts) {
  for (const auto& re : opts.exclude)
    if (std::regex_match(name, re)) return true;
  return false;
}

}  // namespace

TensorBundle weighted_merge(const TensorBundle& a, const TensorBundle& b, double lambda, const MergeOptions& opts) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw UsageError("lambda must be in [0, 1]");
  check_schemas(a, b);
  const auto& k = opts.isa ? simd::kernels(*opts.isa) : simd::active();
  TensorBundle out;
  out.metadata = a.metadata;
  for (const auto& [name, ta] : a.tensors) {
    const auto& tb = b.tensors.at(name);
    if (lambda == 1.0 || excluded(name, opts)) {
      out.tensors.emplace(name, ta);
      continue;
    }
    if (lambda == 0.0) {
      out.tensors.emplace(name, tb);
      continue;
    }
    Tensor t;
    t.shape = ta.shape;
    t.data.resize(ta.data.size());
    k.weighted_sum(ta.data.data(), tb.data.data(), t.data.data(), t.data.size(), lambda, 1.0 - lambda);
    out.tensors.emplace(name, std::move(t));
  }
  return out;
}

TensorBundle doge_merge(const TensorBundle& sft, const TensorBundle& rm, const MergeOptions& opts) {
  return weighted_merge(sft, rm, 0.5, opts);
}

std::string merge_label(double lambda, const std::string& a_name, const std::string& b_name) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.3g %s + %.3g %s", lambda, a_name.c_str(), 1.0 - lambda, b_name.c_str());
  return buf;
}

}  // namespace kgpf

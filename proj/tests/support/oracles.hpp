// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

// Test-only reference implementations. They deliberately avoid the library's
// traversal and scoring code paths so they can serve as independent checks.

#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kgpf/graph.hpp"

namespace kgpf::oracle {

using Walk = std::pair<std::vector<std::string>, std::vector<std::string>>;  // concepts, relations

/// Every walk of 1..max_hops edges from `start`, built by scanning the raw edge list at each
/// step, keeping only walks whose concepts are pairwise distinct.
inline std::multiset<Walk> simple_paths(const std::vector<RelationEdge>& edges, const std::string& start,
                                        std::size_t max_hops) {
  std::vector<Walk> frontier{{{start}, {}}};
  std::multiset<Walk> out;
  for (std::size_t hop = 0; hop < max_hops; ++hop) {
    std::vector<Walk> next;
    for (const auto& w : frontier) {
      for (const auto& e : edges) {
        if (e.src != w.first.back()) continue;
        Walk ext = w;
        ext.first.push_back(e.dst);
        ext.second.push_back(e.relation);
        next.push_back(std::move(ext));
      }
    }
    for (const auto& w : next) {
      std::vector<std::string> sorted = w.first;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) out.insert(w);
    }
    frontier = std::move(next);  // walks with repeats are extended too, then filtered
  }
  return out;
}

/// LCS by enumerating every subsequence of the shorter sequence (exponential; keep inputs small).
inline std::size_t brute_force_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto& s = a.size() <= b.size() ? a : b;
  const auto& t = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << s.size()); ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (mask & (std::size_t{1} << i)) sub.push_back(s[i]);
    if (sub.size() <= best) continue;
    std::size_t j = 0;
    for (const auto& tok : t)
      if (j < sub.size() && tok == sub[j]) ++j;
    if (j == sub.size()) best = sub.size();
  }
  return best;
}

/// Clipped unigram overlap by repeated removal from a copy of the reference.
inline std::size_t brute_force_unigram_matches(const std::vector<std::string>& cand, std::vector<std::string> ref) {
  std::size_t m = 0;
  for (const auto& tok : cand) {
    auto it = std::find(ref.begin(), ref.end(), tok);
    if (it != ref.end()) {
      ref.erase(it);
      ++m;
    }
  }
  return m;
}

}  // namespace kgpf::oracle

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgpf/graph.hpp"

namespace kgpf {

struct MatcherSettings {
  std::size_t n_max = 6;
  double threshold = 0.7;
};

/// Dictionary of normalized concept names and synonyms.
class TermIndex {
 public:
  /// n_max in [1, 10], threshold in (0, 1]; throws UsageError otherwise.
  static TermIndex build(const KnowledgeGraph& graph, MatcherSettings settings = {});

  const std::map<std::string, std::set<std::string>>& entries() const { return entries_; }
  std::size_t n_max() const { return settings_.n_max; }
  double threshold() const { return settings_.threshold; }
  bool empty() const { return entries_.empty(); }

  /// Keys sharing at least one token with `tokens`.
  std::set<std::string> candidates(const std::vector<std::string>& tokens) const;

 private:
  MatcherSettings settings_;
  std::map<std::string, std::set<std::string>> entries_;
  std::unordered_map<std::string, std::vector<std::string>> keys_by_token_;
};

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct Mention {
  std::string cui;
  Span span;
  std::string surface;
  std::string term;  // index key that matched
  double score = 0.0;

  bool operator==(const Mention&) const = default;
};

/// |A ∩ B| / |A ∪ B| over token sets. Empty-vs-empty is 0.
double token_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Sliding-window Jaccard matching of the note against the index, overlap-resolved, sorted by span start.
std::vector<Mention> extract_mentions(const TermIndex& index, std::string_view note_text);

}  // namespace kgpf

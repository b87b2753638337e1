// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kgpf/graph.hpp"
#include "kgpf/matcher.hpp"
#include "kgpf/notes.hpp"

namespace kgpf {

enum class PathLabel { unlabeled, positive, negative };

std::string_view to_string(PathLabel label);

/// Alternating concept/relation walk. concepts.size() == relations.size() + 1.
struct KgPath {
  std::vector<std::string> concepts;
  std::vector<std::string> relations;
  PathLabel label = PathLabel::unlabeled;
  std::string note_id;
  std::optional<Mention> start_mention;

  std::size_t hops() const { return relations.size(); }
  const std::string& start() const { return concepts.front(); }
  const std::string& terminal() const { return concepts.back(); }

  /// Same walk, ignoring label and provenance.
  bool same_walk(const KgPath& other) const {
    return concepts == other.concepts && relations == other.relations;
  }
  bool operator==(const KgPath&) const = default;
};

inline constexpr std::size_t kDefaultMaxHops = 2;

/// All simple directed paths of 1..max_hops hops from `start`, in DFS preorder over sorted neighbors.
/// Throws LookupError for unknown start, UsageError for max_hops == 0.
std::vector<KgPath> enumerate_paths(const KnowledgeGraph& graph, std::string_view start,
                                    std::size_t max_hops = kDefaultMaxHops,
                                    Traversal mode = Traversal::directed);

struct LabeledPaths {
  std::vector<KgPath> positives;
  std::vector<KgPath> negatives;
};

/// Positive iff the terminal concept is gold.
LabeledPaths label_paths(std::vector<KgPath> paths, const std::set<std::string>& gold);

struct PathCaps {
  std::size_t max_negatives_per_start = 9;
  std::size_t max_examples_per_note = 84;
  std::size_t max_hops = kDefaultMaxHops;
  Traversal traversal = Traversal::directed;
};

struct PathSet {
  std::string note_id;
  std::vector<KgPath> positives;
  std::vector<KgPath> negatives;
  std::vector<std::string> start_concepts;
  bool skipped = false;
  std::string skip_reason;

  std::size_t size() const { return positives.size() + negatives.size(); }
  bool operator==(const PathSet&) const = default;
};

/// Gold cuis that exist in the graph and pass the filter, in input order without duplicates.
std::vector<std::string> mappable_gold(const KnowledgeGraph& graph, const SemanticTypeFilter& filter,
                                       const std::vector<std::string>& gold);

/// Mentions -> filtered starts -> enumerate -> label -> seeded down-sampling.
PathSet build_note_paths(const KnowledgeGraph& graph, const TermIndex& index, const SemanticTypeFilter& filter,
                         const Note& note, std::uint64_t seed, const PathCaps& caps = {});

/// `Name->rel|Name->rel|Name` using preferred names.
std::string format_path(const KgPath& path, const KnowledgeGraph& graph);

/// Grammar-level split of a path string into names and relations, no graph lookup.
struct PathTokens {
  std::vector<std::string> names;
  std::vector<std::string> relations;
};
PathTokens split_path(std::string_view text);

/// Parses and resolves names to cuis. Throws ParseError or ResolutionError.
/// Edges are not checked here; see eval::verify_path_validity.
KgPath parse_path(std::string_view text, const KnowledgeGraph& graph);

/// JSONL, one object per path.
std::string pathset_to_jsonl(const PathSet& set, const KnowledgeGraph& graph);

}  // namespace kgpf

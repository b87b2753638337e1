// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgpf {

struct Concept {
  std::string cui;
  std::string preferred_name;
  std::string semantic_type;  // T\d{3}
  std::vector<std::string> synonyms;

  bool operator==(const Concept&) const = default;
};

struct RelationEdge {
  std::string src;
  std::string relation;
  std::string dst;

  auto operator<=>(const RelationEdge&) const = default;
};

/// Relations of reverse edges synthesized in undirected traversal carry this prefix.
inline constexpr std::string_view kInversePrefix = "~";

enum class Traversal { directed, undirected };

/// Typed directed knowledge graph. Immutable once loaded.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  /// Validates and indexes concepts and edges. Throws LoadError on any violation.
  static KnowledgeGraph build(std::vector<Concept> concepts, std::vector<RelationEdge> edges);

  std::size_t node_count() const { return concepts_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  bool contains(std::string_view cui) const;
  const Concept& concept_at(std::string_view cui) const;  // throws LookupError
  const Concept* find(std::string_view cui) const;

  /// Out-edges sorted by (relation, dst). Throws LookupError for unknown cuis.
  const std::vector<RelationEdge>& neighbors(std::string_view cui) const;

  /// In undirected mode reverse edges are appended as (cui, "~rel", src), then re-sorted.
  std::vector<RelationEdge> neighbors(std::string_view cui, Traversal mode) const;

  /// True if the triple exists. A relation "~r" asks for the reverse edge dst -r-> src.
  bool has_edge(std::string_view src, std::string_view relation, std::string_view dst) const;

  /// First-loaded cui carrying this preferred name.
  std::optional<std::string> resolve_name(std::string_view name) const;

  /// Concepts in load order.
  const std::vector<Concept>& concepts() const { return concepts_; }

  /// Non-fatal findings from build(), e.g. preferred-name collisions.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<Concept> concepts_;
  std::unordered_map<std::string, std::size_t> by_cui_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::vector<std::vector<RelationEdge>> out_;
  std::vector<std::vector<RelationEdge>> in_;
  std::set<RelationEdge> triples_;
  std::size_t edge_count_ = 0;
  std::vector<std::string> warnings_;

  std::size_t index_of(std::string_view cui) const;
};

/// Reads concepts.tsv and edges.tsv. Blank lines and lines starting with '#' are skipped.
KnowledgeGraph load_graph(const std::filesystem::path& concept_file, const std::filesystem::path& edge_file);

/// Semantic-type whitelist applied to start and terminal concepts.
struct SemanticTypeFilter {
  std::set<std::string> allowed;
  bool wildcard = false;

  /// T033, T037, T046, T047, T048, T049, T184.
  static SemanticTypeFilter diagnostic_default();
  static SemanticTypeFilter all_types();
};

bool passes_filter(const Concept& c, const SemanticTypeFilter& filter);

bool is_semantic_type_code(std::string_view s);

}  // namespace kgpf

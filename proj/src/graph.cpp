// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/graph.hpp"

#include <algorithm>
#include <fstream>

#include "kgpf/error.hpp"
#include "kgpf/text.hpp"

namespace kgpf {
namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string triple_str(const RelationEdge& e) {
  return "(" + e.src + ", " + e.relation + ", " + e.dst + ")";
}

template <typename Fn>
void for_each_record(const std::filesystem::path& file, Fn&& fn) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    fn(split(line, '\t'), lineno);
  }
}

}  // namespace

bool is_semantic_type_code(std::string_view s) {
  return s.size() == 4 && s[0] == 'T' && std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

KnowledgeGraph KnowledgeGraph::build(std::vector<Concept> concepts, std::vector<RelationEdge> edges) {
  KnowledgeGraph g;
  g.concepts_ = std::move(concepts);
  for (std::size_t i = 0; i < g.concepts_.size(); ++i) {
    const auto& c = g.concepts_[i];
    if (c.cui.empty()) throw LoadError("empty cui at concept " + std::to_string(i));
    if (!g.by_cui_.emplace(c.cui, i).second) throw LoadError("duplicate cui " + c.cui);
    if (contains_reserved(c.preferred_name))
      throw LoadError("reserved character in preferred name of " + c.cui + ": " + c.preferred_name);
    if (c.preferred_name.empty()) throw LoadError("empty preferred name for " + c.cui);
    if (!is_semantic_type_code(c.semantic_type))
      throw LoadError("invalid semantic type '" + c.semantic_type + "' for " + c.cui);
    auto [it, inserted] = g.by_name_.emplace(c.preferred_name, i);
    if (!inserted)
      g.warnings_.push_back("preferred name '" + c.preferred_name + "' shared by " + g.concepts_[it->second].cui +
                            " and " + c.cui + "; resolving to " + g.concepts_[it->second].cui);
  }

  g.out_.resize(g.concepts_.size());
  g.in_.resize(g.concepts_.size());
  for (auto& e : edges) {
    if (e.relation.empty() || contains_reserved(e.relation))
      throw LoadError("invalid relation in edge " + triple_str(e));
    if (e.relation.starts_with(kInversePrefix))
      throw LoadError("relation may not start with '~' in edge " + triple_str(e));
    if (!g.by_cui_.contains(e.src) || !g.by_cui_.contains(e.dst))
      throw LoadError("dangling edge endpoint " + triple_str(e));
    if (e.src == e.dst) throw LoadError("self-loop " + triple_str(e));
    if (!g.triples_.insert(e).second) throw LoadError("duplicate edge " + triple_str(e));
    g.out_[g.by_cui_.at(e.src)].push_back(e);
    g.in_[g.by_cui_.at(e.dst)].push_back(e);
  }
  g.edge_count_ = g.triples_.size();
  const auto by_rel_dst = [](const RelationEdge& a, const RelationEdge& b) {
    return std::tie(a.relation, a.dst) < std::tie(b.relation, b.dst);
  };
  for (auto& adj : g.out_) std::sort(adj.begin(), adj.end(), by_rel_dst);
  for (auto& adj : g.in_) std::sort(adj.begin(), adj.end(), by_rel_dst);
  return g;
}

std::size_t KnowledgeGraph::index_of(std::string_view cui) const {
  const auto it = by_cui_.find(std::string(cui));
  if (it == by_cui_.end()) throw LookupError("unknown cui " + std::string(cui));
  return it->second;
}

bool KnowledgeGraph::contains(std::string_view cui) const { return by_cui_.contains(std::string(cui)); }

const Concept* KnowledgeGraph::find(std::string_view cui) const {
  const auto it = by_cui_.find(std::string(cui));
  return it == by_cui_.end() ? nullptr : &concepts_[it->second];
}

const Concept& KnowledgeGraph::concept_at(std::string_view cui) const { return concepts_[index_of(cui)]; }

const std::vector<RelationEdge>& KnowledgeGraph::neighbors(std::string_view cui) const {
  return out_[index_of(cui)];
}

std::vector<RelationEdge> KnowledgeGraph::neighbors(std::string_view cui, Traversal mode) const {
  const auto idx = index_of(cui);
  std::vector<RelationEdge> result = out_[idx];
  if (mode == Traversal::undirected) {
    for (const auto& e : in_[idx]) result.push_back({e.dst, std::string(kInversePrefix) + e.relation, e.src});
    std::sort(result.begin(), result.end(), [](const RelationEdge& a, const RelationEdge& b) {
      return std::tie(a.relation, a.dst) < std::tie(b.relation, b.dst);
    });
  }
  return result;
}

bool KnowledgeGraph::has_edge(std::string_view src, std::string_view relation, std::string_view dst) const {
  if (relation.starts_with(kInversePrefix)) {
    relation.remove_prefix(kInversePrefix.size());
    std::swap(src, dst);
  }
  return triples_.contains(RelationEdge{std::string(src), std::string(relation), std::string(dst)});
}

std::optional<std::string> KnowledgeGraph::resolve_name(std::string_view name) const {
  const auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return concepts_[it->second].cui;
}

KnowledgeGraph load_graph(const std::filesystem::path& concept_file, const std::filesystem::path& edge_file) {
  std::vector<Concept> concepts;
  for_each_record(concept_file, [&](std::vector<std::string> cols, std::size_t lineno) {
    if (cols.size() < 3 || cols.size() > 4)
      throw LoadError(concept_file.string() + ":" + std::to_string(lineno) + ": expected 3 or 4 columns");
    Concept c{cols[0], cols[1], cols[2], {}};
    if (cols.size() == 4 && !cols[3].empty()) {
      std::string_view syns = cols[3];
      std::size_t start = 0;
      while (start <= syns.size()) {
        auto pos = syns.find(';', start);
        if (pos == std::string_view::npos) pos = syns.size();
        if (pos > start) c.synonyms.emplace_back(syns.substr(start, pos - start));
        start = pos + 1;
      }
    }
    concepts.push_back(std::move(c));
  });
  std::vector<RelationEdge> edges;
  for_each_record(edge_file, [&](std::vector<std::string> cols, std::size_t lineno) {
    if (cols.size() != 3)
      throw LoadError(edge_file.string() + ":" + std::to_string(lineno) + ": expected 3 columns");
    edges.push_back({cols[0], cols[1], cols[2]});
  });
  return KnowledgeGraph::build(std::move(concepts), std::move(edges));
}

SemanticTypeFilter SemanticTypeFilter::diagnostic_default() {
  return {{"T033", "T037", "T046", "T047", "T048", "T049", "T184"}, false};
}

SemanticTypeFilter SemanticTypeFilter::all_types() { return {{}, true}; }

bool passes_filter(const Concept& c, const SemanticTypeFilter& filter) {
  return filter.wildcard || filter.allowed.contains(c.semantic_type);
}

}  // namespace kgpf

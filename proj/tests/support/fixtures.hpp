// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "kgpf/graph.hpp"
#include "kgpf/rng.hpp"

namespace kgpf::testing {

inline std::filesystem::path data_dir() { return KGPF_TEST_DATA_DIR; }
inline std::filesystem::path repo_dir() { return KGPF_REPO_DIR; }

inline KnowledgeGraph chain_graph() {
  return load_graph(data_dir() / "chain/concepts.tsv", data_dir() / "chain/edges.tsv");
}

inline KnowledgeGraph potassium_graph() {
  return load_graph(data_dir() / "potassium/concepts.tsv", data_dir() / "potassium/edges.tsv");
}

inline Concept concept_of(std::string cui, std::string type = "T047") {
  return Concept{cui, "name " + cui, std::move(type), {}};
}

/// Random simple graph with cuis "N0".."N{n-1}"; `max_edges` attempts, duplicates and self-loops dropped.
inline std::vector<RelationEdge> random_edges(std::size_t n, std::size_t max_edges, std::uint64_t seed) {
  Rng rng(seed);
  std::set<RelationEdge> edges;
  const char* rels[] = {"r1", "r2", "r3", "isa"};
  for (std::size_t i = 0; i < max_edges; ++i) {
    const auto s = rng.below(n), d = rng.below(n);
    if (s == d) continue;
    edges.insert({"N" + std::to_string(s), rels[rng.below(4)], "N" + std::to_string(d)});
  }
  std::vector<RelationEdge> out(edges.begin(), edges.end());
  rng.shuffle(out);
  return out;
}

inline std::vector<Concept> numbered_concepts(std::size_t n) {
  std::vector<Concept> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(concept_of("N" + std::to_string(i)));
  return out;
}

/// Temporary directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("kgpf_" + tag + "_" + std::to_string(fnv1a64(tag + std::to_string(reinterpret_cast<std::uintptr_t>(this)))));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

}  // namespace kgpf::testing

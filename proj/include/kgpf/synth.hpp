// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "kgpf/graph.hpp"
#include "kgpf/notes.hpp"

namespace kgpf {

/// Parameters of the synthetic clinical corpus used for fixtures and acceptance runs.
struct SynthConfig {
  std::size_t num_concepts = 150;
  std::size_t num_notes = 20;
  std::size_t max_out_degree = 5;
  double gold_mention_rate = 0.7;  // chance the note text names its diagnosis
  std::uint64_t seed = 7;
};

struct SynthCorpus {
  std::vector<Concept> concepts;
  std::vector<RelationEdge> edges;
  std::vector<Note> notes;

  KnowledgeGraph graph() const { return KnowledgeGraph::build(concepts, edges); }
};

/// Deterministic in `cfg`. Concept names are unique; every note has at least one gold
/// diagnosis reachable within two hops from a concept its text mentions.
SynthCorpus generate_synthetic(const SynthConfig& cfg);

/// Writes concepts.tsv, edges.tsv and notes.jsonl into `dir`.
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace kgpf

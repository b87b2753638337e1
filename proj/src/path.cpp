// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/path.hpp"

#include <algorithm>
#include <json.hpp>
#include <unordered_set>

#include "kgpf/error.hpp"
#include "kgpf/rng.hpp"

namespace kgpf {

std::string_view to_string(PathLabel label) {
  switch (label) {
    case PathLabel::positive:
      return "positive";
    case PathLabel::negative:
      return "negative";
    case PathLabel::unlabeled:
      break;
  }
  return "unlabeled";
}

namespace {

void dfs(const KnowledgeGraph& graph, std::size_t max_hops, Traversal mode, KgPath& current,
         std::unordered_set<std::string>& on_path, std::vector<KgPath>& out) {
  if (current.hops() == max_hops) return;
  for (const auto& e : graph.neighbors(current.terminal(), mode)) {
    if (on_path.contains(e.dst)) continue;
    current.relations.push_back(e.relation);
    current.concepts.push_back(e.dst);
    on_path.insert(e.dst);
    out.push_back(current);
    dfs(graph, max_hops, mode, current, on_path, out);
    on_path.erase(e.dst);
    current.concepts.pop_back();
    current.relations.pop_back();
  }
}

}  // namespace

std::vector<KgPath> enumerate_paths(const KnowledgeGraph& graph, std::string_view start, std::size_t max_hops,
                                    Traversal mode) {
  if (max_hops == 0) throw UsageError("max_hops must be >= 1");
  if (!graph.contains(start)) throw LookupError("unknown cui " + std::string(start));
  std::vector<KgPath> out;
  KgPath current;
  current.concepts.emplace_back(start);
  std::unordered_set<std::string> on_path{std::string(start)};
  dfs(graph, max_hops, mode, current, on_path, out);
  return out;
}

LabeledPaths label_paths(std::vector<KgPath> paths, const std::set<std::string>& gold) {
  LabeledPaths result;
  for (auto& p : paths) {
    if (gold.contains(p.terminal())) {
      p.label = PathLabel::positive;
      result.positives.push_back(std::move(p));
    } else {
      p.label = PathLabel::negative;
      result.negatives.push_back(std::move(p));
    }
  }
  return result;
}

std::vector<std::string> mappable_gold(const KnowledgeGraph& graph, const SemanticTypeFilter& filter,
                                       const std::vector<std::string>& gold) {
  std::vector<std::string> out;
  for (const auto& cui : gold) {
    const auto* c = graph.find(cui);
    if (c == nullptr || !passes_filter(*c, filter)) continue;
    if (std::find(out.begin(), out.end(), cui) == out.end()) out.push_back(cui);
  }
  return out;
}

PathSet build_note_paths(const KnowledgeGraph& graph, const TermIndex& index, const SemanticTypeFilter& filter,
                         const Note& note, std::uint64_t seed, const PathCaps& caps) {
  PathSet set;
  set.note_id = note.note_id;

  const auto gold_list = mappable_gold(graph, filter, note.gold_diagnoses);
  if (gold_list.empty()) {
    set.skipped = true;
    set.skip_reason = "gold unmappable";
    return set;
  }
  const std::set<std::string> gold(gold_list.begin(), gold_list.end());

  std::vector<const Mention*> start_mentions;
  const auto mentions = extract_mentions(index, note.text);
  for (const auto& m : mentions) {
    if (!passes_filter(graph.concept_at(m.cui), filter)) continue;
    if (std::find(set.start_concepts.begin(), set.start_concepts.end(), m.cui) != set.start_concepts.end()) continue;
    set.start_concepts.push_back(m.cui);
    start_mentions.push_back(&m);
  }
  if (set.start_concepts.empty()) {
    set.skipped = true;
    set.skip_reason = "no valid start concepts";
    return set;
  }

  Rng rng(seed);
  for (std::size_t s = 0; s < set.start_concepts.size(); ++s) {
    auto walks = enumerate_paths(graph, set.start_concepts[s], caps.max_hops, caps.traversal);
    // Terminals are candidate diagnoses, so they pass the same filter as gold; intermediates do not.
    std::erase_if(walks, [&](const KgPath& p) { return !passes_filter(graph.concept_at(p.terminal()), filter); });
    auto labeled = label_paths(std::move(walks), gold);
    auto stamp = [&](KgPath& p) {
      p.note_id = note.note_id;
      p.start_mention = *start_mentions[s];
    };
    for (auto& p : labeled.positives) {
      stamp(p);
      set.positives.push_back(std::move(p));
    }
    const auto& negs = labeled.negatives;
    if (negs.size() > caps.max_negatives_per_start) {
      for (auto i : rng.sample_indices(negs.size(), caps.max_negatives_per_start)) {
        set.negatives.push_back(negs[i]);
        stamp(set.negatives.back());
      }
    } else {
      for (auto p : negs) {
        stamp(p);
        set.negatives.push_back(std::move(p));
      }
    }
  }

  // Per-note cap: positives take precedence, negatives fill what remains.
  if (set.size() > caps.max_examples_per_note) {
    if (set.positives.size() > caps.max_examples_per_note) {
      std::vector<KgPath> kept;
      for (auto i : rng.sample_indices(set.positives.size(), caps.max_examples_per_note))
        kept.push_back(std::move(set.positives[i]));
      set.positives = std::move(kept);
    }
    const auto room = caps.max_examples_per_note - set.positives.size();
    std::vector<KgPath> kept;
    for (auto i : rng.sample_indices(set.negatives.size(), room)) kept.push_back(std::move(set.negatives[i]));
    set.negatives = std::move(kept);
  }
  return set;
}

std::string format_path(const KgPath& path, const KnowledgeGraph& graph) {
  if (path.concepts.size() != path.relations.size() + 1) throw InvariantError("path concept/relation count mismatch");
  std::string out = graph.concept_at(path.concepts[0]).preferred_name;
  for (std::size_t i = 0; i < path.relations.size(); ++i) {
    out += "->";
    out += path.relations[i];
    out += '|';
    out += graph.concept_at(path.concepts[i + 1]).preferred_name;
  }
  return out;
}

namespace {

std::string take_name(std::string_view text, std::size_t begin, std::size_t end) {
  auto name = text.substr(begin, end - begin);
  if (name.empty()) throw ParseError("empty concept name at offset " + std::to_string(begin), begin);
  if (const auto bar = name.find('|'); bar != std::string_view::npos)
    throw ParseError("reserved character '|' in concept name at offset " + std::to_string(begin + bar), begin + bar);
  return std::string(name);
}

}  // namespace

PathTokens split_path(std::string_view text) {
  if (text.empty()) throw ParseError("empty path", 0);
  PathTokens out;
  auto arrow = text.find("->");
  std::size_t name_end = arrow == std::string_view::npos ? text.size() : arrow;
  out.names.push_back(take_name(text, 0, name_end));
  std::size_t pos = name_end;
  while (pos < text.size()) {
    // text[pos..pos+2) == "->"
    const std::size_t rel_begin = pos + 2;
    const auto bar = text.find('|', rel_begin);
    if (bar == std::string_view::npos) {
      const auto at = text.size() - 1;
      throw ParseError("expected '|' after relation at offset " + std::to_string(at), at);
    }
    const auto rel = text.substr(rel_begin, bar - rel_begin);
    if (rel.empty()) throw ParseError("empty relation at offset " + std::to_string(rel_begin), rel_begin);
    if (const auto inner = rel.find("->"); inner != std::string_view::npos)
      throw ParseError("reserved sequence '->' in relation at offset " + std::to_string(rel_begin + inner),
                       rel_begin + inner);
    out.relations.emplace_back(rel);
    arrow = text.find("->", bar + 1);
    name_end = arrow == std::string_view::npos ? text.size() : arrow;
    out.names.push_back(take_name(text, bar + 1, name_end));
    pos = name_end;
  }
  return out;
}

KgPath parse_path(std::string_view text, const KnowledgeGraph& graph) {
  auto tokens = split_path(text);
  KgPath path;
  for (const auto& name : tokens.names) {
    auto cui = graph.resolve_name(name);
    if (!cui) throw ResolutionError("unknown concept name '" + name + "'");
    path.concepts.push_back(std::move(*cui));
  }
  path.relations = std::move(tokens.relations);
  return path;
}

std::string pathset_to_jsonl(const PathSet& set, const KnowledgeGraph& graph) {
  std::string out;
  const auto emit = [&](const KgPath& p) {
    nlohmann::ordered_json j;
    j["note_id"] = set.note_id;
    j["path"] = format_path(p, graph);
    j["label"] = std::string(to_string(p.label));
    j["hops"] = p.hops();
    j["start_cui"] = p.start();
    j["terminal_cui"] = p.terminal();
    out += j.dump();
    out += '\n';
  };
  for (const auto& p : set.positives) emit(p);
  for (const auto& p : set.negatives) emit(p);
  return out;
}

}  // namespace kgpf

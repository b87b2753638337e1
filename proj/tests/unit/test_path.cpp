// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include <doctest.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "kgpf/error.hpp"
#include "kgpf/path.hpp"
#include "oracles.hpp"

using namespace kgpf;
using namespace kgpf::testing;

namespace {

std::multiset<oracle::Walk> as_walks(const std::vector<KgPath>& paths) {
  std::multiset<oracle::Walk> out;
  for (const auto& p : paths) out.insert({p.concepts, p.relations});
  return out;
}

KgPath walk(std::vector<std::string> c, std::vector<std::string> r) {
  KgPath p;
  p.concepts = std::move(c);
  p.relations = std::move(r);
  return p;
}

const std::string kSamplePath = "Elevated k->has_member|Chronic kidney disease (smq)->member_of|K excess";

}  // namespace

TEST_CASE("chain enumeration") {
  const auto paths = enumerate_paths(chain_graph(), "A", 2);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].same_walk(walk({"A", "B"}, {"r1"})));
  CHECK(paths[1].same_walk(walk({"A", "B", "C"}, {"r1", "r2"})));
  CHECK(enumerate_paths(chain_graph(), "C", 2).empty());
  CHECK(enumerate_paths(chain_graph(), "A", 1).size() == 1);
  CHECK_THROWS_AS(enumerate_paths(chain_graph(), "Z", 2), LookupError);
  CHECK_THROWS_AS(enumerate_paths(chain_graph(), "A", 0), UsageError);
}

TEST_CASE("triangle keeps the start from reappearing") {
  const auto g = KnowledgeGraph::build({concept_of("A"), concept_of("B"), concept_of("C")},
                                       {{"A", "r", "B"}, {"B", "r", "C"}, {"C", "r", "A"}});
  const auto paths = enumerate_paths(g, "A", 2);
  CHECK(as_walks(paths) == std::multiset<oracle::Walk>{{{"A", "B"}, {"r"}}, {{"A", "B", "C"}, {"r", "r"}}});
  CHECK(as_walks(enumerate_paths(g, "A", 3)) == oracle::simple_paths({{"A", "r", "B"}, {"B", "r", "C"}, {"C", "r", "A"}}, "A", 3));
}

TEST_CASE("enumeration agrees with the brute-force oracle on random graphs") {
  std::size_t discrepancies = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 5 + seed % 20;
    const auto edges = random_edges(n, 4 * n, seed);
    const auto g = KnowledgeGraph::build(numbered_concepts(n), edges);
    for (std::size_t s = 0; s < n; ++s) {
      const auto start = "N" + std::to_string(s);
      const auto paths = enumerate_paths(g, start, 2);
      if (as_walks(paths) != oracle::simple_paths(edges, start, 2)) ++discrepancies;
      // prefix closure
      for (const auto& p : paths)
        if (p.hops() == 2) {
          const auto prefix = walk({p.concepts[0], p.concepts[1]}, {p.relations[0]});
          CHECK(std::any_of(paths.begin(), paths.end(), [&](const KgPath& q) { return q.same_walk(prefix); }));
        }
    }
  }
  CHECK(discrepancies == 0);
}

TEST_CASE("undirected traversal uses inverse relations") {
  const auto paths = enumerate_paths(chain_graph(), "C", 2, Traversal::undirected);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].same_walk(walk({"C", "B"}, {"~r2"})));
  CHECK(paths[1].same_walk(walk({"C", "B", "A"}, {"~r2", "~r1"})));
}

TEST_CASE("labeling partitions by terminal") {
  auto labeled = label_paths(enumerate_paths(chain_graph(), "A", 2), {"C"});
  REQUIRE(labeled.positives.size() == 1);
  REQUIRE(labeled.negatives.size() == 1);
  CHECK(labeled.positives[0].terminal() == "C");
  CHECK(labeled.positives[0].label == PathLabel::positive);
  CHECK(labeled.negatives[0].terminal() == "B");
  CHECK(label_paths(enumerate_paths(chain_graph(), "A", 2), {"Z"}).positives.empty());
  CHECK(label_paths(enumerate_paths(chain_graph(), "A", 2), {"B", "C"}).negatives.empty());
}

TEST_CASE("note walkthrough on the chain fixture") {
  const auto g = chain_graph();
  const auto idx = TermIndex::build(g);
  const Note note{"n1", "Patient presents with alpha.", {"C"}};
  const auto filter = SemanticTypeFilter::diagnostic_default();
  const auto set = build_note_paths(g, idx, filter, note, 1);
  CHECK_FALSE(set.skipped);
  CHECK(set.start_concepts == std::vector<std::string>{"A"});
  CHECK(set.positives.size() == 1);
  CHECK(set.negatives.size() == 1);
  CHECK(set.positives[0].note_id == "n1");
  CHECK(set.positives[0].start_mention->surface == "alpha");
  CHECK(build_note_paths(g, idx, filter, note, 2) == set);
  CHECK(build_note_paths(g, idx, filter, note, 1, {0, 84}).negatives.empty());

  const auto no_gold = build_note_paths(g, idx, filter, Note{"n2", "alpha", {"Q"}}, 1);
  CHECK(no_gold.skipped);
  CHECK(no_gold.skip_reason == "gold unmappable");
  const auto no_start = build_note_paths(g, idx, filter, Note{"n3", "nothing here", {"C"}}, 1);
  CHECK(no_start.skipped);
  CHECK(no_start.skip_reason == "no valid start concepts");
}

TEST_CASE("filtered types never start or end a labeled path") {
  const auto g = potassium_graph();
  const auto idx = TermIndex::build(g);
  const Note note{"f1", "Elevated potassium; potassium chloride given. Chronic kidney disease (smq).",
                  {"C0020461", "C0000121"}};
  const auto set = build_note_paths(g, idx, SemanticTypeFilter::diagnostic_default(), note, 3);
  CHECK(set.start_concepts == std::vector<std::string>{"C0151825"});
  REQUIRE(set.positives.size() == 1);
  CHECK(format_path(set.positives[0], g) == kSamplePath);
  for (const auto* group : {&set.positives, &set.negatives})
    for (const auto& p : *group) {
      CHECK(g.concept_at(p.terminal()).semantic_type != "T121");
      CHECK(g.concept_at(p.start()).semantic_type != "T121");
    }
}

TEST_CASE("per-note cap keeps positives first") {
  // Hub with 100 diagnostic leaves; half are gold.
  std::vector<Concept> concepts{{"H", "hub term", "T047", {}}};
  std::vector<RelationEdge> edges;
  std::vector<std::string> gold;
  for (int i = 0; i < 100; ++i) {
    concepts.push_back(concept_of("L" + std::to_string(i)));
    edges.push_back({"H", "r", "L" + std::to_string(i)});
    if (i % 2 == 0) gold.push_back("L" + std::to_string(i));
  }
  const auto g = KnowledgeGraph::build(concepts, edges);
  const auto idx = TermIndex::build(g);
  const auto filter = SemanticTypeFilter::diagnostic_default();
  const auto set = build_note_paths(g, idx, filter, Note{"h", "hub term", gold}, 5, {100, 84});
  CHECK(set.size() == 84);
  CHECK(set.positives.size() == 50);
  CHECK(set.negatives.size() == 34);
  const auto capped = build_note_paths(g, idx, filter, Note{"h", "hub term", gold}, 5, {9, 30});
  CHECK(capped.positives.size() == 30);
  CHECK(capped.negatives.empty());
  const auto defaults = build_note_paths(g, idx, filter, Note{"h", "hub term", gold}, 5);
  CHECK(defaults.negatives.size() == 9);
  CHECK(defaults.positives.size() == 50);
}

TEST_CASE("sample path formats and parses") {
  const auto g = potassium_graph();
  const auto p = walk({"C0151825", "C1000001", "C0020461"}, {"has_member", "member_of"});
  CHECK(format_path(p, g) == kSamplePath);
  const auto parsed = parse_path(kSamplePath, g);
  CHECK(parsed.same_walk(p));
  CHECK(format_path(parsed, g) == kSamplePath);
  const auto toks = split_path(kSamplePath);
  CHECK(toks.names == std::vector<std::string>{"Elevated k", "Chronic kidney disease (smq)", "K excess"});
  CHECK(toks.relations == std::vector<std::string>{"has_member", "member_of"});
  CHECK(parse_path("K excess", g).concepts == std::vector<std::string>{"C0020461"});
}

TEST_CASE("parse errors") {
  const auto g = chain_graph();
  CHECK_THROWS_WITH_AS(parse_path("A->r1", g), "expected '|' after relation at offset 4", ParseError);
  try {
    parse_path("Alpha->r1", g);
  } catch (const ParseError& e) {
    CHECK(e.offset() == 8);
  }
  CHECK_THROWS_AS(parse_path("", g), ParseError);
  CHECK_THROWS_AS(parse_path("Alpha->|Beta", g), ParseError);
  CHECK_THROWS_AS(parse_path("Alpha->r1|", g), ParseError);
  CHECK_THROWS_AS(parse_path("Alpha->r1|Nope", g), ResolutionError);
  CHECK(parse_path("Alpha->r1|Beta->r2|Gamma", g).concepts == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("pathset serialization is deterministic") {
  const auto g = chain_graph();
  const auto idx = TermIndex::build(g);
  const auto set = build_note_paths(g, idx, SemanticTypeFilter::diagnostic_default(),
                                    Note{"n1", "alpha", {"C"}}, 1);
  const auto text = pathset_to_jsonl(set, g);
  CHECK(text == pathset_to_jsonl(set, g));
  const auto first = nlohmann::json::parse(text.substr(0, text.find('\n')));
  CHECK(first["note_id"] == "n1");
  CHECK(first["path"] == "Alpha->r1|Beta->r2|Gamma");
  CHECK(first["label"] == "positive");
  CHECK(first["hops"] == 2);
  CHECK(first["start_cui"] == "A");
  CHECK(first["terminal_cui"] == "C");
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "kgpf/error.hpp"
#include "kgpf/matcher.hpp"
#include "kgpf/notes.hpp"
#include "kgpf/text.hpp"

using namespace kgpf;
using namespace kgpf::testing;

namespace {

KnowledgeGraph single(const std::string& name, std::vector<std::string> syns = {}) {
  return KnowledgeGraph::build({{"X1", name, "T047", std::move(syns)}}, {});
}

// Independent Jaccard over token sets built with std::set.
double set_jaccard(const std::string& a, const std::string& b) {
  const auto ta = tokenize_words(a), tb = tokenize_words(b);
  std::set<std::string> sa(ta.begin(), ta.end()), sb(tb.begin(), tb.end()), un = sa;
  un.insert(sb.begin(), sb.end());
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  return un.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(un.size());
}

}  // namespace

TEST_CASE("index keys are normalized names and synonyms") {
  const auto idx = TermIndex::build(single("Elevated K", {"CKD", "Chronic kidney disease"}));
  CHECK(idx.entries().count("elevated k") == 1);
  CHECK(idx.entries().at("ckd") == std::set<std::string>{"X1"});
  CHECK(idx.entries().at("chronic kidney disease") == std::set<std::string>{"X1"});
  for (const auto& [key, _] : idx.entries()) CHECK(normalize_term(key) == key);
  CHECK(TermIndex::build(KnowledgeGraph::build({}, {})).empty());
}

TEST_CASE("settings are validated") {
  const auto g = single("Foo");
  CHECK_THROWS_AS(TermIndex::build(g, {0, 0.7}), UsageError);
  CHECK_THROWS_AS(TermIndex::build(g, {11, 0.7}), UsageError);
  CHECK_THROWS_AS(TermIndex::build(g, {6, 0.0}), UsageError);
  CHECK_THROWS_AS(TermIndex::build(g, {6, 1.5}), UsageError);
}

TEST_CASE("exact containment yields one full-score mention") {
  const auto idx = TermIndex::build(single("Elevated K"));
  const std::string note = "pt with elevated k today";
  const auto ms = extract_mentions(idx, note);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].cui == "X1");
  CHECK(ms[0].surface == "elevated k");
  CHECK(ms[0].score == 1.0);
  CHECK(extract_mentions(idx, "").empty());
}

TEST_CASE("two thirds Jaccard stays below the default threshold") {
  CHECK(token_jaccard({"chronic", "kidney"}, {"chronic", "kidney", "disease"}) == doctest::Approx(2.0 / 3.0));
  const auto idx = TermIndex::build(single("Chronic kidney disease"));
  CHECK(extract_mentions(idx, "chronic kidney").empty());
  const auto loose = TermIndex::build(single("Chronic kidney disease"), {6, 0.6});
  CHECK(extract_mentions(loose, "chronic kidney").size() == 1);
}

TEST_CASE("identical note and key score 1") {
  const auto idx = TermIndex::build(single("Chronic kidney disease (smq)"));
  const auto ms = extract_mentions(idx, "Chronic kidney disease (smq)");
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].score == 1.0);
}

TEST_CASE("mention properties on the synthetic corpus") {
  const auto dir = repo_dir() / "data/synthetic";
  const auto g = load_graph(dir / "concepts.tsv", dir / "edges.tsv");
  const auto notes = read_notes(dir / "notes.jsonl");
  const auto strict = TermIndex::build(g, {6, 0.9});
  const auto loose = TermIndex::build(g, {6, 0.5});
  for (const auto& note : notes) {
    const auto ms = extract_mentions(strict, note.text);
    for (const auto& m : ms) {
      CHECK(m.span.begin < m.span.end);
      CHECK(m.span.end <= note.text.size());
      CHECK(note.text.substr(m.span.begin, m.span.end - m.span.begin) == m.surface);
      CHECK(m.score >= 0.9);
      CHECK(m.score == doctest::Approx(set_jaccard(m.surface, m.term)).epsilon(1e-12));
      CHECK(strict.entries().at(m.term).count(m.cui) == 1);
    }
    for (std::size_t i = 1; i < ms.size(); ++i) CHECK(ms[i - 1].span.begin <= ms[i].span.begin);
  }
  for (const auto& note : notes) {
    // Lowering the threshold never removes a mention.
    const auto lo = extract_mentions(loose, note.text);
    for (const auto& m : extract_mentions(strict, note.text))
      CHECK(std::find(lo.begin(), lo.end(), m) != lo.end());
  }
}

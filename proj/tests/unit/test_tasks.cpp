// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include <doctest.h>

#include "fixtures.hpp"
#include "kgpf/error.hpp"
#include "kgpf/io.hpp"
#include "kgpf/eval.hpp"
#include "kgpf/tasks.hpp"

using namespace kgpf;
using namespace kgpf::testing;

namespace {

// Hub "H" with leaves L0..L{n-1}; the first `n_pos` leaves are gold.
struct HubFixture {
  KnowledgeGraph graph;
  PathSet set;
  std::set<std::string> gold;
  std::string text = "hub note";
};

HubFixture hub(std::size_t n_pos, std::size_t n_neg) {
  HubFixture f;
  std::vector<Concept> concepts{{"H", "Hub", "T047", {}}};
  std::vector<RelationEdge> edges;
  f.set.note_id = "hub";
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    const auto cui = "L" + std::to_string(i);
    concepts.push_back({cui, "Leaf " + std::to_string(i), "T047", {}});
    edges.push_back({"H", "r", cui});
    KgPath p;
    p.concepts = {"H", cui};
    p.relations = {"r"};
    p.note_id = "hub";
    if (i < n_pos) {
      p.label = PathLabel::positive;
      f.set.positives.push_back(p);
      f.gold.insert(cui);
    } else {
      p.label = PathLabel::negative;
      f.set.negatives.push_back(p);
    }
  }
  f.graph = KnowledgeGraph::build(concepts, edges);
  return f;
}

void check_candidates(const TaskInstance& inst, const HubFixture& f) {
  for (std::size_t i = 0; i < inst.candidates.size(); ++i) {
    const bool is_pos = std::find(inst.meta.positive_indices.begin(), inst.meta.positive_indices.end(), i) !=
                        inst.meta.positive_indices.end();
    CHECK(verify_path_validity(f.graph, f.gold, inst.candidates[i]) ==
          (is_pos ? PathValidity::valid : PathValidity::invalid));
  }
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("task kinds round-trip") {
  for (auto k : kAllTasks) CHECK(parse_task_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_task_kind("p5"), UsageError);
}

TEST_CASE("p10 shape") {
  const auto f = hub(1, 12);
  const TaskContext ctx{f.graph, f.text};
  const auto batch = build_p10(f.set, ctx, 7);
  REQUIRE(batch.instances.size() == 1);
  const auto& inst = batch.instances[0];
  CHECK(inst.candidates.size() == 10);
  CHECK(as_set(inst.candidates).size() == 10);
  CHECK(inst.meta.num_positives == 1);
  CHECK(inst.target == inst.candidates[inst.meta.positive_indices[0]]);
  CHECK(inst.target == "Hub->r|Leaf 0");
  check_candidates(inst, f);
  CHECK(build_p10(f.set, ctx, 7).instances == batch.instances);
  CHECK(build_p10(hub(0, 12).set, ctx, 7).instances.empty());
  const auto few = build_p10(hub(2, 8).set, ctx, 7);
  CHECK(few.instances.empty());
  CHECK(few.skipped == 2);
}

TEST_CASE("p2 shape") {
  const auto f = hub(2, 5);
  const TaskContext ctx{f.graph, f.text};
  const auto batch = build_p2(f.set, ctx, 3);
  REQUIRE(batch.instances.size() == 2);
  for (const auto& inst : batch.instances) {
    CHECK(inst.candidates.size() == 2);
    CHECK(inst.meta.num_positives == 1);
    check_candidates(inst, f);
  }
  CHECK(build_p2(f.set, ctx, 3).instances == batch.instances);
  CHECK(build_p2(hub(1, 0).set, ctx, 3).instances.empty());
}

TEST_CASE("pn10 with a seed drawing k = 2") {
  const auto f = hub(3, 20);
  const TaskContext ctx{f.graph, f.text};
  constexpr std::uint64_t kSeed = 13;
  CHECK(Rng(kSeed).between(1, 5) == 2);  // first draw of the builder's stream
  const auto batch = build_pn10(f.set, ctx, kSeed);
  REQUIRE(batch.instances.size() == 3);
  const auto& inst = batch.instances[0];
  CHECK(inst.candidates.size() == 10);
  CHECK(inst.meta.num_positives == 2);
  check_candidates(inst, f);
  // target lists the positives in candidate order
  std::string expect;
  for (auto i : inst.meta.positive_indices) expect += (expect.empty() ? "" : "\n") + inst.candidates[i];
  CHECK(inst.target == expect);
}

TEST_CASE("pn10 boundaries") {
  {
    const auto f = hub(1, 9);
    const auto batch = build_pn10(f.set, {f.graph, f.text}, 1);
    REQUIRE(batch.instances.size() == 1);
    CHECK(batch.instances[0].meta.num_positives == 1);
    CHECK(batch.instances[0].candidates.size() == 10);
  }
  {
    const auto f = hub(7, 20);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      for (const auto& inst : build_pn10(f.set, {f.graph, f.text}, seed).instances) {
        CHECK(inst.meta.num_positives >= 1);
        CHECK(inst.meta.num_positives <= 5);
        CHECK(inst.candidates.size() == 10);
      }
    }
  }
  {
    // Only 6 negatives: at least 4 positives are needed to fill ten slots.
    const auto f = hub(5, 6);
    for (const auto& inst : build_pn10(f.set, {f.graph, f.text}, 4).instances) CHECK(inst.meta.num_positives >= 4);
    CHECK(build_pn10(hub(2, 6).set, {f.graph, f.text}, 4).instances.empty());
  }
}

TEST_CASE("next-hop and completion on the sample path") {
  const auto g = potassium_graph();
  KgPath p;
  p.concepts = {"C0151825", "C1000001", "C0020461"};
  p.relations = {"has_member", "member_of"};
  p.label = PathLabel::positive;
  const auto split = split_next_hop(p, 1, g);
  CHECK(split.partial == "Elevated k->has_member|Chronic kidney disease (smq)->member_of");
  CHECK(split.target == "|K excess");
  CHECK(split_next_hop(p, 0, g).target == "|Chronic kidney disease (smq)");
  CHECK_THROWS_AS(split_next_hop(p, 2, g), InvariantError);

  PathSet set;
  set.note_id = "f";
  set.positives = {p};
  const TaskContext ctx{g, "note"};
  const auto pc = build_pc(set, ctx);
  REQUIRE(pc.instances.size() == 1);
  CHECK(pc.instances[0].partial_path == "Elevated k");
  CHECK(pc.instances[0].target == "->has_member|Chronic kidney disease (smq)->member_of|K excess");
  CHECK(pc.instances[0].candidates.empty());

  const auto nhp = build_nhp(set, ctx, 11);
  REQUIRE(nhp.instances.size() == 1);
  const auto& n = nhp.instances[0];
  CHECK(n.partial_path->ends_with("->has_member") != n.partial_path->ends_with("->member_of"));
  CHECK(n.target.starts_with("|"));
  CHECK(build_nhp(set, ctx, 11).instances == nhp.instances);
  // suffix consistency: partial + target renders the walk up to the predicted concept
  std::size_t arrows = 0;
  for (auto pos = n.partial_path->find("->"); pos != std::string::npos; pos = n.partial_path->find("->", pos + 2))
    ++arrows;
  const auto j = arrows - 1;
  CHECK(*n.partial_path + n.target == split_next_hop(p, j, g).partial + split_next_hop(p, j, g).target);
  CHECK(parse_path(*n.partial_path + n.target, g).concepts.back() == p.concepts[j + 1]);
  CHECK(format_path(parse_path(*pc.instances[0].partial_path + pc.instances[0].target, g), g) == format_path(p, g));
}

TEST_CASE("one-hop nhp and pc") {
  const auto g = chain_graph();
  KgPath p;
  p.concepts = {"A", "B"};
  p.relations = {"r1"};
  PathSet set;
  set.positives = {p};
  const TaskContext ctx{g, ""};
  const auto nhp = build_nhp(set, ctx, 99);
  CHECK(nhp.instances[0].partial_path == "Alpha->r1");
  CHECK(nhp.instances[0].target == "|Beta");
  CHECK(build_pc(set, ctx).instances[0].target == "->r1|Beta");
  CHECK(build_pc(PathSet{}, ctx).instances.empty());
}

TEST_CASE("per-note instance cap is shared round-robin") {
  const auto f = hub(40, 30);
  const TaskContext ctx{f.graph, f.text};
  const std::vector<TaskKind> kinds(kAllTasks.begin(), kAllTasks.end());
  const auto batches = build_note_tasks(f.set, ctx, 5, kinds, 84);
  std::size_t total = 0;
  for (const auto& b : batches) total += b.instances.size();
  CHECK(total == 84);
  for (const auto& b : batches) CHECK(b.instances.size() >= 16);
  const auto uncapped = build_note_tasks(f.set, ctx, 5, kinds, kNoCap);
  for (const auto& b : uncapped) CHECK(b.instances.size() == 40);
  // capped output is a prefix of the uncapped output
  for (std::size_t t = 0; t < kinds.size(); ++t)
    for (std::size_t i = 0; i < batches[t].instances.size(); ++i)
      CHECK(batches[t].instances[i] == uncapped[t].instances[i]);
}

TEST_CASE("dataset io round-trips") {
  const auto f = hub(3, 12);
  const TaskContext ctx{f.graph, f.text};
  std::vector<TaskInstance> all;
  for (const auto& b : build_note_tasks(f.set, ctx, 8, {kAllTasks.begin(), kAllTasks.end()})) {
    all.insert(all.end(), b.instances.begin(), b.instances.end());
  }
  TempDir dir("tasks_io");
  CHECK(write_dataset(all, dir / "a.jsonl") == all.size());
  CHECK(read_dataset(dir / "a.jsonl") == all);
  write_dataset(all, dir / "b.jsonl");
  CHECK(read_file(dir / "a.jsonl") == read_file(dir / "b.jsonl"));
  CHECK(write_dataset({}, dir / "empty.jsonl") == 0);
  CHECK(std::filesystem::exists(dir / "empty.jsonl"));
  CHECK(std::filesystem::file_size(dir / "empty.jsonl") == 0);

  const auto line = instance_to_json(all.back());
  CHECK(line.find("\"candidates\":null") != std::string::npos);
  CHECK(line.rfind("{\"task\":\"pc\",\"note_id\"", 0) == 0);
  CHECK_THROWS_AS(instance_from_json("{\"task\":\"p10\"}"), DataError);
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/tasks.hpp"

#include <algorithm>
#include <json.hpp>
#include <utility>

#include "kgpf/error.hpp"
#include "kgpf/io.hpp"
#include "kgpf/rng.hpp"

namespace kgpf {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::p10:
      return "p10";
    case TaskKind::p2:
      return "p2";
    case TaskKind::pn10:
      return "pn10";
    case TaskKind::nhp:
      return "nhp";
    case TaskKind::pc:
      return "pc";
  }
  return "?";
}

TaskKind parse_task_kind(std::string_view token) {
  for (auto k : kAllTasks)
    if (to_string(k) == token) return k;
  throw UsageError("unknown task '" + std::string(token) + "' (expected p10|p2|pn10|nhp|pc)");
}

namespace {

using Candidate = std::pair<std::string, bool>;  // rendered path, is positive

TaskInstance make_choice_instance(TaskKind kind, const PathSet& set, const TaskContext& ctx, std::uint64_t seed,
                                  std::vector<Candidate> cands, Rng& rng) {
  rng.shuffle(cands);
  TaskInstance inst;
  inst.task = kind;
  inst.note_id = set.note_id;
  inst.note_text = std::string(ctx.note_text);
  inst.meta.seed = seed;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i].second) {
      inst.meta.positive_indices.push_back(i);
      if (!inst.target.empty()) inst.target += '\n';
      inst.target += cands[i].first;
    }
    inst.candidates.push_back(std::move(cands[i].first));
  }
  inst.meta.num_positives = inst.meta.positive_indices.size();
  return inst;
}

void add_negatives(std::vector<Candidate>& cands, const PathSet& set, const TaskContext& ctx,
                   const std::vector<std::size_t>& picks) {
  for (auto i : picks) cands.emplace_back(format_path(set.negatives[i], ctx.graph), false);
}

}  // namespace

TaskBatch build_p10(const PathSet& set, const TaskContext& ctx, std::uint64_t seed, std::size_t cap) {
  TaskBatch batch;
  if (set.negatives.size() < 9) {
    batch.skipped = set.positives.size();
    return batch;
  }
  Rng rng(seed);
  for (const auto& pos : set.positives) {
    if (batch.instances.size() >= cap) break;
    std::vector<Candidate> cands{{format_path(pos, ctx.graph), true}};
    add_negatives(cands, set, ctx, rng.sample_indices(set.negatives.size(), 9));
    batch.instances.push_back(make_choice_instance(TaskKind::p10, set, ctx, seed, std::move(cands), rng));
  }
  return batch;
}

TaskBatch build_p2(const PathSet& set, const TaskContext& ctx, std::uint64_t seed, std::size_t cap) {
  TaskBatch batch;
  if (set.negatives.empty()) {
    batch.skipped = set.positives.size();
    return batch;
  }
  Rng rng(seed);
  for (const auto& pos : set.positives) {
    if (batch.instances.size() >= cap) break;
    std::vector<Candidate> cands{{format_path(pos, ctx.graph), true}};
    add_negatives(cands, set, ctx, {static_cast<std::size_t>(rng.below(set.negatives.size()))});
    batch.instances.push_back(make_choice_instance(TaskKind::p2, set, ctx, seed, std::move(cands), rng));
  }
  return batch;
}

TaskBatch build_pn10(const PathSet& set, const TaskContext& ctx, std::uint64_t seed, std::size_t cap) {
  TaskBatch batch;
  const auto n_pos = static_cast<std::int64_t>(set.positives.size());
  const auto n_neg = static_cast<std::int64_t>(set.negatives.size());
  const std::int64_t k_lo = std::max<std::int64_t>(1, 10 - n_neg);
  const std::int64_t k_hi = std::min(kPn10MaxPositives, n_pos);
  if (n_pos == 0 || k_lo > k_hi) {
    batch.skipped = set.positives.size();
    return batch;
  }
  Rng rng(seed);
  // One instance per positive; that positive is always among the chosen k.
  for (std::size_t anchor = 0; anchor < set.positives.size(); ++anchor) {
    if (batch.instances.size() >= cap) break;
    const auto drawn = rng.between(1, kPn10MaxPositives);
    const auto k = static_cast<std::size_t>(std::clamp(drawn, k_lo, k_hi));
    std::vector<Candidate> cands{{format_path(set.positives[anchor], ctx.graph), true}};
    for (auto i : rng.sample_indices(set.positives.size() - 1, k - 1)) {
      const auto idx = i < anchor ? i : i + 1;
      cands.emplace_back(format_path(set.positives[idx], ctx.graph), true);
    }
    add_negatives(cands, set, ctx, rng.sample_indices(set.negatives.size(), 10 - k));
    batch.instances.push_back(make_choice_instance(TaskKind::pn10, set, ctx, seed, std::move(cands), rng));
  }
  return batch;
}

NextHopSplit split_next_hop(const KgPath& path, std::size_t j, const KnowledgeGraph& graph) {
  if (j >= path.hops()) throw InvariantError("next-hop index out of range");
  NextHopSplit s;
  s.partial = graph.concept_at(path.concepts[0]).preferred_name;
  for (std::size_t i = 0; i < j; ++i) {
    s.partial += "->" + path.relations[i] + "|" + graph.concept_at(path.concepts[i + 1]).preferred_name;
  }
  s.partial += "->" + path.relations[j];
  s.target = "|" + graph.concept_at(path.concepts[j + 1]).preferred_name;
  return s;
}

TaskBatch build_nhp(const PathSet& set, const TaskContext& ctx, std::uint64_t seed, std::size_t cap) {
  TaskBatch batch;
  Rng rng(seed);
  for (const auto& pos : set.positives) {
    if (batch.instances.size() >= cap) break;
    if (pos.hops() == 0) {
      ++batch.skipped;
      continue;
    }
    const auto j = static_cast<std::size_t>(rng.below(pos.hops()));
    auto split = split_next_hop(pos, j, ctx.graph);
    TaskInstance inst;
    inst.task = TaskKind::nhp;
    inst.note_id = set.note_id;
    inst.note_text = std::string(ctx.note_text);
    inst.partial_path = std::move(split.partial);
    inst.target = std::move(split.target);
    inst.meta = {1, seed, {}};
    batch.instances.push_back(std::move(inst));
  }
  return batch;
}

TaskBatch build_pc(const PathSet& set, const TaskContext& ctx, std::size_t cap) {
  TaskBatch batch;
  for (const auto& pos : set.positives) {
    if (batch.instances.size() >= cap) break;
    const auto& start = ctx.graph.concept_at(pos.start()).preferred_name;
    const auto full = format_path(pos, ctx.graph);
    TaskInstance inst;
    inst.task = TaskKind::pc;
    inst.note_id = set.note_id;
    inst.note_text = std::string(ctx.note_text);
    inst.partial_path = start;
    inst.target = full.substr(start.size());
    inst.meta = {1, 0, {}};
    batch.instances.push_back(std::move(inst));
  }
  return batch;
}

TaskBatch build_task(TaskKind kind, const PathSet& set, const TaskContext& ctx, std::uint64_t seed, std::size_t cap) {
  switch (kind) {
    case TaskKind::p10:
      return build_p10(set, ctx, seed, cap);
    case TaskKind::p2:
      return build_p2(set, ctx, seed, cap);
    case TaskKind::pn10:
      return build_pn10(set, ctx, seed, cap);
    case TaskKind::nhp:
      return build_nhp(set, ctx, seed, cap);
    case TaskKind::pc:
      return build_pc(set, ctx, cap);
  }
  throw InvariantError("unhandled task kind");
}

std::vector<TaskBatch> build_note_tasks(const PathSet& set, const TaskContext& ctx, std::uint64_t note_seed,
                                        const std::vector<TaskKind>& kinds, std::size_t instance_cap) {
  std::vector<TaskBatch> full;
  for (auto k : kinds) full.push_back(build_task(k, set, ctx, derive_seed(note_seed, to_string(k))));

  std::vector<TaskBatch> out(kinds.size());
  std::vector<std::size_t> next(kinds.size(), 0);
  std::size_t taken = 0;
  bool progress = true;
  while (taken < instance_cap && progress) {
    progress = false;
    for (std::size_t t = 0; t < kinds.size() && taken < instance_cap; ++t) {
      if (next[t] < full[t].instances.size()) {
        out[t].instances.push_back(std::move(full[t].instances[next[t]++]));
        ++taken;
        progress = true;
      }
    }
  }
  for (std::size_t t = 0; t < kinds.size(); ++t) out[t].skipped = full[t].skipped;
  return out;
}

std::string instance_to_json(const TaskInstance& inst) {
  nlohmann::ordered_json j;
  j["task"] = std::string(to_string(inst.task));
  j["note_id"] = inst.note_id;
  j["note_text"] = inst.note_text;
  const bool choice = inst.task == TaskKind::p10 || inst.task == TaskKind::p2 || inst.task == TaskKind::pn10;
  if (choice)
    j["candidates"] = inst.candidates;
  else
    j["candidates"] = nullptr;
  if (inst.partial_path)
    j["partial_path"] = *inst.partial_path;
  else
    j["partial_path"] = nullptr;
  j["target"] = inst.target;
  nlohmann::ordered_json meta;
  meta["num_positives"] = inst.meta.num_positives;
  meta["seed"] = inst.meta.seed;
  meta["positive_indices"] = inst.meta.positive_indices;
  j["meta"] = std::move(meta);
  return j.dump();
}

TaskInstance instance_from_json(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    TaskInstance inst;
    inst.task = parse_task_kind(j.at("task").get<std::string>());
    inst.note_id = j.at("note_id").get<std::string>();
    inst.note_text = j.at("note_text").get<std::string>();
    if (!j.at("candidates").is_null()) inst.candidates = j.at("candidates").get<std::vector<std::string>>();
    if (!j.at("partial_path").is_null()) inst.partial_path = j.at("partial_path").get<std::string>();
    inst.target = j.at("target").get<std::string>();
    const auto& meta = j.at("meta");
    inst.meta.num_positives = meta.at("num_positives").get<std::size_t>();
    inst.meta.seed = meta.at("seed").get<std::uint64_t>();
    inst.meta.positive_indices = meta.at("positive_indices").get<std::vector<std::size_t>>();
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad task instance: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("bad task instance: ") + e.what());
  }
}

std::size_t write_dataset(const std::vector<TaskInstance>& instances, const std::filesystem::path& out) {
  std::string body;
  for (const auto& inst : instances) {
    body += instance_to_json(inst);
    body += '\n';
  }
  write_file_atomic(out, body);
  return instances.size();
}

std::vector<TaskInstance> read_dataset(const std::filesystem::path& in) {
  std::vector<TaskInstance> out;
  const auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      out.push_back(instance_from_json(lines[i]));
    } catch (const DataError& e) {
      throw DataError(in.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace kgpf

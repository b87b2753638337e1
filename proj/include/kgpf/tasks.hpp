// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgpf/graph.hpp"
#include "kgpf/path.hpp"

namespace kgpf {

enum class TaskKind { p10, p2, pn10, nhp, pc };

inline constexpr std::array<TaskKind, 5> kAllTasks = {TaskKind::p10, TaskKind::p2, TaskKind::pn10, TaskKind::nhp,
                                                      TaskKind::pc};

std::string_view to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view token);  // throws UsageError

struct TaskMeta {
  std::size_t num_positives = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> positive_indices;  // candidate slots holding positives

  bool operator==(const TaskMeta&) const = default;
};

struct TaskInstance {
  TaskKind task = TaskKind::p10;
  std::string note_id;
  std::string note_text;
  std::vector<std::string> candidates;       // empty for NHP/PC
  std::optional<std::string> partial_path;   // NHP/PC only
  std::string target;
  TaskMeta meta;

  bool operator==(const TaskInstance&) const = default;
};

/// What the builders need beyond the PathSet: names for rendering and the note text.
struct TaskContext {
  const KnowledgeGraph& graph;
  std::string_view note_text;
};

struct TaskBatch {
  std::vector<TaskInstance> instances;
  std::size_t skipped = 0;  // positives that could not form an instance
};

inline constexpr std::size_t kNoCap = static_cast<std::size_t>(-1);
inline constexpr std::size_t kDefaultInstancesPerNote = 84;
inline constexpr std::int64_t kPn10MaxPositives = 5;

TaskBatch build_p10(const PathSet& set, const TaskContext& ctx, std::uint64_t seed, std::size_t cap = kNoCap);
TaskBatch build_p2(const PathSet& set, const TaskContext& ctx, std::uint64_t seed, std::size_t cap = kNoCap);
TaskBatch build_pn10(const PathSet& set, const TaskContext& ctx, std::uint64_t seed, std::size_t cap = kNoCap);
TaskBatch build_nhp(const PathSet& set, const TaskContext& ctx, std::uint64_t seed, std::size_t cap = kNoCap);
TaskBatch build_pc(const PathSet& set, const TaskContext& ctx, std::size_t cap = kNoCap);

TaskBatch build_task(TaskKind kind, const PathSet& set, const TaskContext& ctx, std::uint64_t seed,
                     std::size_t cap = kNoCap);

/// Builds every requested task for one note with per-task substream seeds, then trims to
/// `instance_cap` total by taking instances round-robin across tasks.
std::vector<TaskBatch> build_note_tasks(const PathSet& set, const TaskContext& ctx, std::uint64_t note_seed,
                                        const std::vector<TaskKind>& kinds,
                                        std::size_t instance_cap = kDefaultInstancesPerNote);

/// Next-hop split of a rendered path at relation index j.
struct NextHopSplit {
  std::string partial;
  std::string target;
};
NextHopSplit split_next_hop(const KgPath& path, std::size_t j, const KnowledgeGraph& graph);

std::string instance_to_json(const TaskInstance& inst);
TaskInstance instance_from_json(std::string_view line);  // throws DataError

std::size_t write_dataset(const std::vector<TaskInstance>& instances, const std::filesystem::path& out);
std::vector<TaskInstance> read_dataset(const std::filesystem::path& in);

}  // namespace kgpf

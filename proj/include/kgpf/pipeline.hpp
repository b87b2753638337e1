// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgpf/eval.hpp"
#include "kgpf/graph.hpp"
#include "kgpf/matcher.hpp"
#include "kgpf/path.hpp"
#include "kgpf/tasks.hpp"

namespace kgpf {

/// Everything a pipeline command needs. Loaded from a JSON file, then overridden by flags.
struct PipelineConfig {
  std::filesystem::path concepts;
  std::filesystem::path edges;
  std::filesystem::path notes;
  std::filesystem::path paths_file;  // make-tasks input; defaults to <out_dir>/paths.jsonl
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<std::string>> semantic_types;  // absent: diagnostic default; ["*"]: all
  MatcherSettings matcher;
  PathCaps caps;
  std::vector<TaskKind> tasks{kAllTasks.begin(), kAllTasks.end()};
  std::size_t instance_cap = kDefaultInstancesPerNote;
  std::size_t threads = 0;  // 0: unset; the CLI falls back to KGPF_THREADS, library code runs serially
  bool quiet = false;

  /// Relative paths inside the file resolve against the file's directory.
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static PipelineConfig from_file(const std::filesystem::path& file);

  /// Serializable echo written into output manifests (thread count and verbosity omitted).
  nlohmann::ordered_json to_json() const;

  SemanticTypeFilter filter() const;
  std::uint64_t require_seed() const;  // throws UsageError when unset
};

struct CommandOutcome {
  nlohmann::ordered_json summary;
  std::vector<std::string> warnings;
};

/// concepts + edges + notes -> <out_dir>/paths.jsonl and <out_dir>/build_stats.json.
CommandOutcome cmd_build_paths(const PipelineConfig& cfg);

/// paths.jsonl -> <out_dir>/tasks_<kind>.jsonl per requested task plus <out_dir>/manifest.json.
CommandOutcome cmd_make_tasks(const PipelineConfig& cfg);

/// Runs the lexical baseline on a dataset and writes predictions JSONL.
CommandOutcome cmd_baseline_judge(const std::filesystem::path& dataset, const std::filesystem::path& predictions_out);

struct EvaluateRequest {
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> predictions;  // absent with baseline=true
  Metric metric = Metric::rouge1;
  bool baseline = false;
  std::filesystem::path report_out;
  bool per_instance = false;
};

CommandOutcome cmd_evaluate(const EvaluateRequest& req);

struct MergeRequest {
  std::filesystem::path a;
  std::filesystem::path b;
  double lambda = 0.7;
  bool doge = false;
  std::filesystem::path out;
  std::vector<std::string> exclude;
  bool allow_nonfinite = false;
};

CommandOutcome cmd_merge(const MergeRequest& req);

struct GradcheckRequest {
  std::string op;
  std::size_t seeds = 20;
  double tol = 1e-4;
  std::optional<double> beta;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> report_out;
};

/// summary["pass"] reports the verdict; the CLI turns a failure into exit code 3.
CommandOutcome cmd_gradcheck(const GradcheckRequest& req);

}  // namespace kgpf

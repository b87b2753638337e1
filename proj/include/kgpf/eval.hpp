// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kgpf/graph.hpp"
#include "kgpf/tasks.hpp"

namespace kgpf {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Clipped unigram overlap. Either side empty scores 0.
RougeScore rouge_1(std::string_view candidate, std::string_view reference);

/// Token-level LCS. Either side empty scores 0.
RougeScore rouge_l(std::string_view candidate, std::string_view reference);

/// LCS length of two token sequences (O(n*m) table, O(min) memory).
std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// 1 iff the trimmed, ASCII case-folded strings are equal.
int exact_match(std::string_view prediction, std::string_view gold);

enum class PathValidity { valid, invalid, malformed };
std::string_view to_string(PathValidity v);

/// Re-applies the labeling rule: every edge exists and the terminal is gold.
/// Grammar failures are `malformed`; unknown names are `invalid`.
PathValidity verify_path_validity(const KnowledgeGraph& graph, const std::set<std::string>& note_gold,
                                  std::string_view path_string);

/// Scores candidates by ROUGE-1 F1 of their concept names against the note text.
/// P10/P2 pick the argmax (lowest index on ties); PN10 returns every candidate scoring
/// strictly above the median, newline-joined in candidate order.
std::string lexical_baseline_judge(const TaskInstance& instance);

/// Per-candidate scores used by lexical_baseline_judge.
std::vector<double> lexical_candidate_scores(const TaskInstance& instance);

enum class Metric { rouge1, rougeL, exact };
std::string_view to_string(Metric m);
Metric parse_metric(std::string_view s);  // throws UsageError

struct InstanceScore {
  RougeScore score;
  bool malformed = false;
  bool empty_pair = false;
};

struct EvalReport {
  Metric metric = Metric::rouge1;
  std::vector<InstanceScore> per_instance;
  double corpus_f1 = 0.0;  // x100
  double corpus_precision = 0.0;
  double corpus_recall = 0.0;
  std::size_t n = 0;
  std::size_t n_malformed = 0;
  std::size_t n_empty = 0;

  std::string to_json(bool include_per_instance = false) const;
};

RougeScore score_pair(Metric metric, std::string_view prediction, std::string_view target);

/// PN10 targets and predictions are scored with newlines removed.
EvalReport evaluate(const std::vector<TaskInstance>& dataset, const std::vector<std::string>& predictions,
                    Metric metric, const std::vector<bool>& malformed = {});

/// Reads predictions JSONL ({"index": int, "prediction": str}) and scores against the dataset.
/// Lines that fail to parse count as malformed and score 0 at their line position.
EvalReport evaluate_predictions(const std::filesystem::path& dataset, const std::filesystem::path& predictions,
                                Metric metric);

std::string predictions_to_jsonl(const std::vector<std::string>& predictions);

}  // namespace kgpf

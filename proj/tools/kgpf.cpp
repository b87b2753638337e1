// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

// kgpf: knowledge-graph path supervision pipeline.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "kgpf/error.hpp"
#include "kgpf/pipeline.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-graph path supervision toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::size_t threads = 0;
  bool quiet = false;
  app.add_option("--config", config_file, "JSON pipeline config");
  app.add_option("--seed", seed, "Root seed for all sampling");
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads (default: KGPF_THREADS or 1)");
  app.add_flag("--quiet", quiet, "Suppress summaries on stdout");

  // build-paths
  auto* build = app.add_subcommand("build-paths", "Extract mentions, enumerate and label KG paths per note");
  std::string concepts, edges, notes, sem_types;
  std::optional<std::size_t> n_max, max_neg, max_ex, max_hops;
  std::optional<double> threshold;
  for (auto* sub : {build}) {
    sub->add_option("--concepts", concepts, "concepts.tsv");
    sub->add_option("--edges", edges, "edges.tsv");
    sub->add_option("--notes", notes, "notes JSONL");
  }
  build->add_option("--n-max", n_max, "Matcher window length in tokens");
  build->add_option("--threshold", threshold, "Matcher Jaccard threshold");
  build->add_option("--max-negatives", max_neg, "Negatives kept per start concept");
  build->add_option("--max-examples", max_ex, "Paths kept per note");
  build->add_option("--max-hops", max_hops, "Maximum path length in hops");
  build->add_option("--semantic-types", sem_types, "Comma-separated type codes, or * for all");

  // make-tasks
  auto* make = app.add_subcommand("make-tasks", "Build task datasets from labeled paths");
  std::string paths_file, tasks;
  std::optional<std::size_t> instance_cap;
  make->add_option("--concepts", concepts, "concepts.tsv");
  make->add_option("--edges", edges, "edges.tsv");
  make->add_option("--notes", notes, "notes JSONL");
  make->add_option("--paths", paths_file, "paths.jsonl from build-paths (default: <out-dir>/paths.jsonl)");
  make->add_option("--tasks", tasks, "Subset of p10,p2,pn10,nhp,pc");
  make->add_option("--instance-cap", instance_cap, "Instances per note across all tasks");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against a task dataset");
  kgpf::EvaluateRequest eval_req;
  std::string predictions, metric = "rouge1", report;
  evaluate->add_option("--dataset", eval_req.dataset, "Task dataset JSONL")->required();
  evaluate->add_option("--predictions", predictions, "Predictions JSONL");
  evaluate->add_option("--metric", metric, "rouge1|rougeL|exact");
  evaluate->add_flag("--baseline", eval_req.baseline, "Score the lexical baseline judge instead of a predictions file");
  evaluate->add_option("--report", report, "Report path (default: <out-dir>/eval_report.json)");
  evaluate->add_flag("--per-instance", eval_req.per_instance, "Include per-instance scores in the report");

  // baseline-judge
  auto* judge = app.add_subcommand("baseline-judge", "Write lexical-baseline predictions for a P10/P2/PN10 dataset");
  std::string judge_dataset, judge_out;
  judge->add_option("--dataset", judge_dataset, "Task dataset JSONL")->required();
  judge->add_option("--out", judge_out, "Predictions JSONL (default: <out-dir>/predictions.jsonl)");

  // merge
  auto* merge = app.add_subcommand("merge", "Weighted average of two tensor bundles");
  kgpf::MergeRequest merge_req;
  std::string merge_out;
  merge->add_option("--a", merge_req.a, "First bundle (weight lambda)")->required();
  merge->add_option("--b", merge_req.b, "Second bundle (weight 1 - lambda)")->required();
  auto* lambda_opt = merge->add_option("--lambda", merge_req.lambda, "Weight of the first bundle")->check(CLI::Range(0.0, 1.0));
  merge->add_flag("--doge", merge_req.doge, "Simple 0.5/0.5 average")->excludes(lambda_opt);
  merge->add_option("--out", merge_out, "Output bundle (default: <out-dir>/merged.safetensors)");
  merge->add_option("--exclude", merge_req.exclude, "Regex of tensor names copied from --a unmerged");
  merge->add_flag("--allow-nonfinite", merge_req.allow_nonfinite, "Accept NaN/Inf values on load");

  // gradcheck
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of an objective's analytic gradient");
  kgpf::GradcheckRequest grad_req;
  std::string grad_report;
  grad->add_option("op", grad_req.op, "sft|dpo|grpo|dss")->required();
  grad->add_option("--seeds", grad_req.seeds, "Random seeds per (vocab, contexts) configuration");
  grad->add_option("--tol", grad_req.tol, "Relative error tolerance");
  grad->add_option("--beta", grad_req.beta, "Fixed beta for dpo/grpo");
  grad->add_option("--report", grad_report, "Report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const auto emit = [&](const kgpf::CommandOutcome& outcome) {
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
    if (!quiet) std::cout << outcome.summary.dump(2) << "\n";
  };

  try {
    kgpf::PipelineConfig cfg = config_file.empty() ? kgpf::PipelineConfig{} : kgpf::PipelineConfig::from_file(config_file);
    if (seed) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!concepts.empty()) cfg.concepts = concepts;
    if (!edges.empty()) cfg.edges = edges;
    if (!notes.empty()) cfg.notes = notes;
    if (!paths_file.empty()) cfg.paths_file = paths_file;
    if (n_max) cfg.matcher.n_max = *n_max;
    if (threshold) cfg.matcher.threshold = *threshold;
    if (max_neg) cfg.caps.max_negatives_per_start = *max_neg;
    if (max_ex) cfg.caps.max_examples_per_note = *max_ex;
    if (max_hops) cfg.caps.max_hops = *max_hops;
    if (!sem_types.empty()) cfg.semantic_types = split_csv(sem_types);
    if (!tasks.empty()) {
      cfg.tasks.clear();
      for (const auto& t : split_csv(tasks)) cfg.tasks.push_back(kgpf::parse_task_kind(t));
    }
    if (instance_cap) cfg.instance_cap = *instance_cap;
    // Thread count: flag, then config file, then KGPF_THREADS, then 1.
    if (threads > 0) cfg.threads = threads;
    if (cfg.threads == 0) {
      if (const char* env = std::getenv("KGPF_THREADS")) cfg.threads = std::strtoul(env, nullptr, 10);
      if (cfg.threads == 0) cfg.threads = 1;
    }
    quiet = quiet || cfg.quiet;
    cfg.quiet = quiet;

    if (*build) {
      emit(kgpf::cmd_build_paths(cfg));
    } else if (*make) {
      emit(kgpf::cmd_make_tasks(cfg));
    } else if (*evaluate) {
      eval_req.metric = kgpf::parse_metric(metric);
      if (!predictions.empty()) eval_req.predictions = predictions;
      eval_req.report_out = report.empty() ? cfg.out_dir / "eval_report.json" : std::filesystem::path(report);
      emit(kgpf::cmd_evaluate(eval_req));
    } else if (*judge) {
      emit(kgpf::cmd_baseline_judge(judge_dataset,
                                    judge_out.empty() ? cfg.out_dir / "predictions.jsonl" : std::filesystem::path(judge_out)));
    } else if (*merge) {
      merge_req.out = merge_out.empty() ? cfg.out_dir / "merged.safetensors" : std::filesystem::path(merge_out);
      emit(kgpf::cmd_merge(merge_req));
    } else if (*grad) {
      if (cfg.seed) grad_req.seed = *cfg.seed;
      if (!grad_report.empty()) grad_req.report_out = grad_report;
      const auto outcome = kgpf::cmd_gradcheck(grad_req);
      emit(outcome);
      if (!outcome.summary.at("pass").get<bool>()) return 3;
    }
  } catch (const kgpf::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const kgpf::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

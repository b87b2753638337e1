// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/pipeline.hpp"

#include <map>
#include <set>

#include "kgpf/error.hpp"
#include "kgpf/gradcheck.hpp"
#include "kgpf/io.hpp"
#include "kgpf/merge.hpp"
#include "kgpf/notes.hpp"
#include "kgpf/parallel.hpp"
#include "kgpf/rng.hpp"
#include "kgpf/tensor_bundle.hpp"

namespace kgpf {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw UsageError(std::string("no ") + what + " file configured");
  if (!fs::is_regular_file(p)) throw UsageError(std::string(what) + " file not found: " + p.string());
}

std::string dump_line(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j, const fs::path& base) {
  static const std::set<std::string> kKeys = {"graph", "notes", "paths_file", "out_dir",  "seed",
                                              "semantic_types", "matcher", "caps", "tasks", "instance_cap",
                                              "threads", "quiet"};
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kKeys.contains(key)) throw UsageError("unknown config key '" + key + "'");
  PipelineConfig c;
  try {
    if (j.contains("graph")) {
      const auto& g = j.at("graph");
      if (g.contains("concepts")) c.concepts = resolve(base, g.at("concepts").get<std::string>());
      if (g.contains("edges")) c.edges = resolve(base, g.at("edges").get<std::string>());
    }
    if (j.contains("notes")) c.notes = resolve(base, j.at("notes").get<std::string>());
    if (j.contains("paths_file")) c.paths_file = resolve(base, j.at("paths_file").get<std::string>());
    if (j.contains("out_dir")) c.out_dir = resolve(base, j.at("out_dir").get<std::string>());
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("semantic_types")) c.semantic_types = j.at("semantic_types").get<std::vector<std::string>>();
    if (j.contains("matcher")) {
      const auto& m = j.at("matcher");
      c.matcher.n_max = m.value("n_max", c.matcher.n_max);
      c.matcher.threshold = m.value("threshold", c.matcher.threshold);
    }
    if (j.contains("caps")) {
      const auto& k = j.at("caps");
      c.caps.max_negatives_per_start = k.value("max_negatives_per_start", c.caps.max_negatives_per_start);
      c.caps.max_examples_per_note = k.value("max_examples_per_note", c.caps.max_examples_per_note);
      c.caps.max_hops = k.value("max_hops", c.caps.max_hops);
      if (k.value("undirected", false)) c.caps.traversal = Traversal::undirected;
    }
    if (j.contains("tasks")) {
      c.tasks.clear();
      for (const auto& t : j.at("tasks")) c.tasks.push_back(parse_task_kind(t.get<std::string>()));
    }
    c.instance_cap = j.value("instance_cap", c.instance_cap);
    c.threads = j.value("threads", c.threads);
    c.quiet = j.value("quiet", c.quiet);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::from_file(const fs::path& file) {
  if (!fs::is_regular_file(file)) throw UsageError("config file not found: " + file.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config " + file.string() + ": " + e.what());
  }
  return from_json(j, file.parent_path());
}

ojson PipelineConfig::to_json() const {
  ojson j;
  j["graph"] = {{"concepts", concepts.string()}, {"edges", edges.string()}};
  j["notes"] = notes.string();
  if (seed) j["seed"] = *seed;
  if (semantic_types) {
    j["semantic_types"] = *semantic_types;
  } else {
    const auto def = SemanticTypeFilter::diagnostic_default();
    j["semantic_types"] = std::vector<std::string>(def.allowed.begin(), def.allowed.end());
  }
  j["matcher"] = {{"n_max", matcher.n_max}, {"threshold", matcher.threshold}};
  j["caps"] = {{"max_negatives_per_start", caps.max_negatives_per_start},
               {"max_examples_per_note", caps.max_examples_per_note},
               {"max_hops", caps.max_hops},
               {"undirected", caps.traversal == Traversal::undirected}};
  auto tasks_j = ojson::array();
  for (auto t : tasks) tasks_j.push_back(std::string(to_string(t)));
  j["tasks"] = tasks_j;
  j["instance_cap"] = instance_cap;
  return j;
}

SemanticTypeFilter PipelineConfig::filter() const {
  if (!semantic_types) return SemanticTypeFilter::diagnostic_default();
  SemanticTypeFilter f;
  for (const auto& t : *semantic_types) {
    if (t == "*") return SemanticTypeFilter::all_types();
    if (!is_semantic_type_code(t)) throw UsageError("bad semantic type code '" + t + "'");
    f.allowed.insert(t);
  }
  return f;
}

std::uint64_t PipelineConfig::require_seed() const {
  if (!seed) throw UsageError("a seed is required (--seed or \"seed\" in the config)");
  return *seed;
}

CommandOutcome cmd_build_paths(const PipelineConfig& cfg) {
  require_file(cfg.concepts, "concepts");
  require_file(cfg.edges, "edges");
  require_file(cfg.notes, "notes");
  const auto seed = cfg.require_seed();
  const auto filter = cfg.filter();

  CommandOutcome out;
  const auto graph = load_graph(cfg.concepts, cfg.edges);
  out.warnings = graph.warnings();
  const auto index = TermIndex::build(graph, cfg.matcher);
  const auto notes = read_notes(cfg.notes);

  std::vector<PathSet> sets(notes.size());
  parallel_for(notes.size(), cfg.threads, [&](std::size_t i) {
    sets[i] = build_note_paths(graph, index, filter, notes[i], derive_seed(seed, "paths", notes[i].note_id), cfg.caps);
  });

  std::string body;
  std::size_t positives = 0, negatives = 0, processed = 0;
  std::set<std::string> starts;
  auto skipped = ojson::array();
  for (const auto& s : sets) {
    if (s.skipped) {
      skipped.push_back({{"note_id", s.note_id}, {"reason", s.skip_reason}});
      continue;
    }
    ++processed;
    positives += s.positives.size();
    negatives += s.negatives.size();
    starts.insert(s.start_concepts.begin(), s.start_concepts.end());
    body += pathset_to_jsonl(s, graph);
  }
  write_file_atomic(cfg.out_dir / "paths.jsonl", body);

  ojson stats;
  stats["config"] = cfg.to_json();
  stats["graph"] = {{"nodes", graph.node_count()}, {"edges", graph.edge_count()}};
  stats["notes_total"] = notes.size();
  stats["notes_processed"] = processed;
  stats["notes_skipped"] = skipped.size();
  stats["positives"] = positives;
  stats["negatives"] = negatives;
  stats["examples"] = positives + negatives;
  stats["examples_per_note"] = processed ? static_cast<double>(positives + negatives) / processed : 0.0;
  stats["unique_start_concepts"] = starts.size();
  stats["skipped"] = skipped;
  write_file_atomic(cfg.out_dir / "build_stats.json", dump_line(stats));

  if (processed == 0) out.warnings.push_back("no note produced paths; all " + std::to_string(notes.size()) + " skipped");
  out.summary = stats;
  return out;
}

CommandOutcome cmd_make_tasks(const PipelineConfig& cfg) {
  require_file(cfg.concepts, "concepts");
  require_file(cfg.edges, "edges");
  require_file(cfg.notes, "notes");
  const auto paths_file = cfg.paths_file.empty() ? cfg.out_dir / "paths.jsonl" : cfg.paths_file;
  require_file(paths_file, "paths");
  const auto seed = cfg.require_seed();
  if (cfg.tasks.empty()) throw UsageError("no tasks requested");

  CommandOutcome out;
  const auto graph = load_graph(cfg.concepts, cfg.edges);
  const auto notes = read_notes(cfg.notes);

  std::map<std::string, PathSet> by_note;
  const auto lines = read_lines(paths_file);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto where = paths_file.string() + ":" + std::to_string(i + 1);
    try {
      const auto j = nlohmann::json::parse(lines[i]);
      auto path = parse_path(j.at("path").get<std::string>(), graph);
      const auto note_id = j.at("note_id").get<std::string>();
      path.note_id = note_id;
      const auto label = j.at("label").get<std::string>();
      auto& set = by_note[note_id];
      set.note_id = note_id;
      if (label == "positive") {
        path.label = PathLabel::positive;
        set.positives.push_back(std::move(path));
      } else if (label == "negative") {
        path.label = PathLabel::negative;
        set.negatives.push_back(std::move(path));
      } else {
        throw DataError("unknown label '" + label + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }

  std::vector<const Note*> work;
  for (const auto& n : notes)
    if (by_note.contains(n.note_id)) work.push_back(&n);
  if (work.empty()) out.warnings.push_back("path input is empty; writing empty task datasets");

  std::vector<std::vector<TaskBatch>> per_note(work.size());
  parallel_for(work.size(), cfg.threads, [&](std::size_t i) {
    const Note& note = *work[i];
    TaskContext ctx{graph, note.text};
    per_note[i] = build_note_tasks(by_note.at(note.note_id), ctx, derive_seed(seed, "tasks", note.note_id), cfg.tasks,
                                   cfg.instance_cap);
  });

  ojson counts, skipped, files;
  for (std::size_t t = 0; t < cfg.tasks.size(); ++t) {
    std::vector<TaskInstance> all;
    std::size_t skip = 0;
    for (auto& batches : per_note) {
      for (auto& inst : batches[t].instances) all.push_back(std::move(inst));
      skip += batches[t].skipped;
    }
    const auto name = std::string(to_string(cfg.tasks[t]));
    const auto file = "tasks_" + name + ".jsonl";
    counts[name] = write_dataset(all, cfg.out_dir / file);
    skipped[name] = skip;
    files[name] = file;
  }
  ojson manifest;
  manifest["config"] = cfg.to_json();
  manifest["notes"] = work.size();
  manifest["counts"] = counts;
  manifest["skipped"] = skipped;
  manifest["files"] = files;
  write_file_atomic(cfg.out_dir / "manifest.json", dump_line(manifest));
  out.summary = manifest;
  return out;
}

CommandOutcome cmd_baseline_judge(const fs::path& dataset, const fs::path& predictions_out) {
  require_file(dataset, "dataset");
  const auto instances = read_dataset(dataset);
  std::vector<std::string> preds;
  preds.reserve(instances.size());
  for (const auto& inst : instances) preds.push_back(lexical_baseline_judge(inst));
  write_file_atomic(predictions_out, predictions_to_jsonl(preds));
  CommandOutcome out;
  out.summary["predictions"] = predictions_out.string();
  out.summary["n"] = preds.size();
  return out;
}

CommandOutcome cmd_evaluate(const EvaluateRequest& req) {
  require_file(req.dataset, "dataset");
  EvalReport report;
  if (req.baseline) {
    const auto instances = read_dataset(req.dataset);
    std::vector<std::string> preds;
    for (const auto& inst : instances) preds.push_back(lexical_baseline_judge(inst));
    report = evaluate(instances, preds, req.metric);
  } else {
    if (!req.predictions) throw UsageError("evaluate needs --predictions or --baseline");
    require_file(*req.predictions, "predictions");
    report = evaluate_predictions(req.dataset, *req.predictions, req.metric);
  }
  const auto text = report.to_json(req.per_instance) + "\n";
  if (!req.report_out.empty()) write_file_atomic(req.report_out, text);
  CommandOutcome out;
  out.summary = ojson::parse(text);
  if (report.n_malformed > 0) out.warnings.push_back(std::to_string(report.n_malformed) + " malformed prediction lines");
  return out;
}

CommandOutcome cmd_merge(const MergeRequest& req) {
  require_file(req.a, "first bundle");
  require_file(req.b, "second bundle");
  const LoadOptions opts{req.allow_nonfinite};
  const auto a = load_bundle(req.a, opts);
  const auto b = load_bundle(req.b, opts);
  MergeOptions mopts;
  for (const auto& pattern : req.exclude) {
    try {
      mopts.exclude.emplace_back(pattern);
    } catch (const std::regex_error& e) {
      throw UsageError("bad --exclude pattern '" + pattern + "': " + e.what());
    }
  }
  const double lambda = req.doge ? 0.5 : req.lambda;
  auto merged = weighted_merge(a, b, lambda, mopts);
  merged.metadata["merge"] = merge_label(lambda, req.a.stem().string(), req.b.stem().string());
  save_bundle(merged, req.out);

  CommandOutcome out;
  out.summary["out"] = req.out.string();
  out.summary["lambda"] = lambda;
  out.summary["merge"] = merged.metadata["merge"];
  out.summary["tensors"] = merged.tensors.size();
  out.summary["simd"] = std::string(simd::to_string(simd::active_isa()));
  return out;
}

CommandOutcome cmd_gradcheck(const GradcheckRequest& req) {
  GradCheckSuite suite;
  suite.seeds = req.seeds;
  suite.tol = req.tol;
  suite.beta = req.beta;
  suite.root_seed = req.seed;
  const auto report = run_gradcheck(req.op, suite);
  const auto text = report.to_json() + "\n";
  if (req.report_out) write_file_atomic(*req.report_out, text);
  CommandOutcome out;
  out.summary = ojson::parse(text);
  return out;
}

}  // namespace kgpf

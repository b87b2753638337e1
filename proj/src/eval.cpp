// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/eval.hpp"

#include <algorithm>
#include <json.hpp>
#include <map>

#include "kgpf/error.hpp"
#include "kgpf/io.hpp"
#include "kgpf/path.hpp"
#include "kgpf/text.hpp"

namespace kgpf {
namespace {

RougeScore from_counts(std::size_t matches, std::size_t n_cand, std::size_t n_ref) {
  RougeScore s;
  if (n_cand == 0 || n_ref == 0) return s;
  s.precision = static_cast<double>(matches) / static_cast<double>(n_cand);
  s.recall = static_cast<double>(matches) / static_cast<double>(n_ref);
  const double denom = s.precision + s.recall;
  s.f1 = denom > 0.0 ? 2.0 * s.precision * s.recall / denom : 0.0;
  return s;
}

}  // namespace

RougeScore rouge_1(std::string_view candidate, std::string_view reference) {
  const auto cand = tokenize_words(candidate);
  const auto ref = tokenize_words(reference);
  std::map<std::string_view, std::size_t> ref_counts;
  for (const auto& t : ref) ++ref_counts[t];
  std::size_t matches = 0;
  for (const auto& t : cand) {
    auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++matches;
    }
  }
  return from_counts(matches, cand.size(), ref.size());
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto& outer = a.size() >= b.size() ? a : b;
  const auto& inner = a.size() >= b.size() ? b : a;
  std::vector<std::size_t> prev(inner.size() + 1, 0), cur(inner.size() + 1, 0);
  for (std::size_t i = 1; i <= outer.size(); ++i) {
    for (std::size_t j = 1; j <= inner.size(); ++j) {
      cur[j] = outer[i - 1] == inner[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[inner.size()];
}

RougeScore rouge_l(std::string_view candidate, std::string_view reference) {
  const auto cand = tokenize_words(candidate);
  const auto ref = tokenize_words(reference);
  return from_counts(lcs_length(cand, ref), cand.size(), ref.size());
}

int exact_match(std::string_view prediction, std::string_view gold) {
  return fold_trim(prediction) == fold_trim(gold) ? 1 : 0;
}

std::string_view to_string(PathValidity v) {
  switch (v) {
    case PathValidity::valid:
      return "valid";
    case PathValidity::invalid:
      return "invalid";
    case PathValidity::malformed:
      return "malformed";
  }
  return "?";
}

PathValidity verify_path_validity(const KnowledgeGraph& graph, const std::set<std::string>& note_gold,
                                  std::string_view path_string) {
  KgPath path;
  try {
    path = parse_path(path_string, graph);
  } catch (const ParseError&) {
    return PathValidity::malformed;
  } catch (const ResolutionError&) {
    return PathValidity::invalid;
  }
  for (std::size_t i = 0; i < path.relations.size(); ++i) {
    if (!graph.has_edge(path.concepts[i], path.relations[i], path.concepts[i + 1])) return PathValidity::invalid;
  }
  if (path.hops() == 0) return PathValidity::invalid;
  return note_gold.contains(path.terminal()) ? PathValidity::valid : PathValidity::invalid;
}

std::vector<double> lexical_candidate_scores(const TaskInstance& instance) {
  std::vector<double> scores;
  scores.reserve(instance.candidates.size());
  for (const auto& cand : instance.candidates) {
    std::string names;
    try {
      for (const auto& n : split_path(cand).names) {
        if (!names.empty()) names += ' ';
        names += n;
      }
    } catch (const ParseError&) {
      scores.push_back(0.0);
      continue;
    }
    scores.push_back(rouge_1(names, instance.note_text).f1);
  }
  return scores;
}

std::string lexical_baseline_judge(const TaskInstance& instance) {
  if (instance.task == TaskKind::nhp || instance.task == TaskKind::pc)
    throw UsageError("lexical baseline judge does not support task " + std::string(to_string(instance.task)));
  if (instance.candidates.empty()) return {};
  const auto scores = lexical_candidate_scores(instance);
  if (instance.task != TaskKind::pn10) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
      if (scores[i] > scores[best]) best = i;
    return instance.candidates[best];
  }
  auto sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  std::string out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > median) {
      if (!out.empty()) out += '\n';
      out += instance.candidates[i];
    }
  }
  return out;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::rouge1:
      return "rouge1";
    case Metric::rougeL:
      return "rougeL";
    case Metric::exact:
      return "exact";
  }
  return "?";
}

Metric parse_metric(std::string_view s) {
  for (auto m : {Metric::rouge1, Metric::rougeL, Metric::exact})
    if (to_string(m) == s) return m;
  throw UsageError("unknown metric '" + std::string(s) + "' (expected rouge1|rougeL|exact)");
}

RougeScore score_pair(Metric metric, std::string_view prediction, std::string_view target) {
  switch (metric) {
    case Metric::rouge1:
      return rouge_1(prediction, target);
    case Metric::rougeL:
      return rouge_l(prediction, target);
    case Metric::exact: {
      const double em = exact_match(prediction, target);
      return {em, em, em};
    }
  }
  throw InvariantError("unhandled metric");
}

EvalReport evaluate(const std::vector<TaskInstance>& dataset, const std::vector<std::string>& predictions,
                    Metric metric, const std::vector<bool>& malformed) {
  if (dataset.size() != predictions.size())
    throw DataError("length mismatch: " + std::to_string(dataset.size()) + " instances vs " +
                    std::to_string(predictions.size()) + " predictions");
  EvalReport r;
  r.metric = metric;
  r.n = dataset.size();
  double sp = 0, sr = 0, sf = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    InstanceScore s;
    s.malformed = i < malformed.size() && malformed[i];
    if (s.malformed) {
      ++r.n_malformed;
    } else {
      // Newlines in PN10 targets are plain separators to the tokenizer.
      s.score = score_pair(metric, predictions[i], dataset[i].target);
      s.empty_pair = tokenize_words(predictions[i]).empty() && tokenize_words(dataset[i].target).empty();
      if (s.empty_pair) ++r.n_empty;
    }
    sp += s.score.precision;
    sr += s.score.recall;
    sf += s.score.f1;
    r.per_instance.push_back(s);
  }
  if (r.n > 0) {
    const double scale = 100.0 / static_cast<double>(r.n);
    r.corpus_precision = sp * scale;
    r.corpus_recall = sr * scale;
    r.corpus_f1 = sf * scale;
  }
  return r;
}

std::string EvalReport::to_json(bool include_per_instance) const {
  nlohmann::ordered_json j;
  j["metric"] = std::string(to_string(metric));
  j["corpus_f1"] = corpus_f1;
  j["corpus_precision"] = corpus_precision;
  j["corpus_recall"] = corpus_recall;
  j["n"] = n;
  j["n_malformed"] = n_malformed;
  j["n_empty"] = n_empty;
  if (include_per_instance) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : per_instance) {
      nlohmann::ordered_json e;
      e["precision"] = s.score.precision;
      e["recall"] = s.score.recall;
      e["f1"] = s.score.f1;
      e["malformed"] = s.malformed;
      arr.push_back(std::move(e));
    }
    j["per_instance"] = std::move(arr);
  }
  return j.dump(2);
}

EvalReport evaluate_predictions(const std::filesystem::path& dataset_path, const std::filesystem::path& predictions,
                                Metric metric) {
  const auto dataset = read_dataset(dataset_path);
  auto lines = read_lines(predictions);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() != dataset.size())
    throw DataError("length mismatch: " + std::to_string(dataset.size()) + " instances vs " +
                    std::to_string(lines.size()) + " prediction lines");

  const std::size_t n = dataset.size();
  std::vector<std::string> preds(n);
  std::vector<bool> filled(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception&) {
      continue;  // unreadable: left unfilled, scored as malformed
    }
    const auto where = predictions.string() + ":" + std::to_string(i + 1);
    if (!j.is_object() || !j.contains("prediction")) throw DataError(where + ": missing key 'prediction'");
    if (!j["prediction"].is_string()) continue;
    std::size_t index = i;
    if (j.contains("index")) {
      if (!j["index"].is_number_integer() || j["index"].get<long long>() < 0 ||
          static_cast<std::size_t>(j["index"].get<long long>()) >= n)
        continue;
      index = static_cast<std::size_t>(j["index"].get<long long>());
    }
    if (filled[index]) throw DataError(where + ": duplicate index " + std::to_string(index));
    preds[index] = j["prediction"].get<std::string>();
    filled[index] = true;
  }
  std::vector<bool> malformed(n);
  for (std::size_t i = 0; i < n; ++i) malformed[i] = !filled[i];
  return evaluate(dataset, preds, metric, malformed);
}

std::string predictions_to_jsonl(const std::vector<std::string>& predictions) {
  std::string out;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    nlohmann::ordered_json j;
    j["index"] = i;
    j["prediction"] = predictions[i];
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace kgpf

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <set>
#include <string>

#include "kgpf/error.hpp"
#include "kgpf/io.hpp"
#include "kgpf/rng.hpp"

namespace kgpf {
namespace {

constexpr std::array kModifiers = {"acute",     "chronic",  "elevated",  "reduced",   "severe",    "mild",
                                   "recurrent", "diffuse",  "focal",     "primary",   "secondary", "benign",
                                   "persistent", "transient", "congenital", "bilateral", "refractory", "latent"};
constexpr std::array kBases = {"potassium",   "kidney disease", "anemia",      "hypertension", "edema",
                               "fever",       "cough",          "sepsis",      "pneumonia",    "fracture",
                               "delirium",    "hepatitis",      "pancreatitis", "dermatitis",  "arrhythmia",
                               "hypoxia",     "ulcer",          "effusion",    "neuropathy",   "thrombosis",
                               "cardiomyopathy", "colitis",     "seizure",     "stenosis",     "infarction",
                               "obstruction", "bleeding",       "infection",   "glucose",      "sodium"};
constexpr std::array kDiagnosticTypes = {"T033", "T037", "T046", "T047", "T048", "T049", "T184"};
constexpr std::array kOtherTypes = {"T121", "T061", "T170", "T023", "T059"};
constexpr std::array kRelations = {"has_member",   "member_of",        "may_cause",  "associated_with",
                                   "cause_of",     "has_finding_site", "isa",        "may_be_finding_of",
                                   "has_manifestation", "clinically_similar"};
constexpr std::array kFiller = {"pt",     "seen",   "today",   "reports", "denies", "stable", "overnight",
                                "labs",   "reviewed", "plan",  "continue", "monitor", "noted", "with",
                                "and",    "on",     "exam",    "notable", "for",     "follow", "up"};

template <typename Arr>
const char* pick(Rng& rng, const Arr& arr) {
  return arr[rng.below(arr.size())];
}

std::string filler(Rng& rng, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += pick(rng, kFiller);
  }
  return out;
}

bool diagnostic(const Concept& c) {
  return std::find(kDiagnosticTypes.begin(), kDiagnosticTypes.end(), c.semantic_type) != kDiagnosticTypes.end();
}

}  // namespace

SynthCorpus generate_synthetic(const SynthConfig& cfg) {
  const std::size_t max_names = kModifiers.size() * kBases.size();
  if (cfg.num_concepts < 10 || cfg.num_concepts > max_names)
    throw UsageError("synthetic corpus needs between 10 and " + std::to_string(max_names) + " concepts");
  Rng rng(cfg.seed);
  SynthCorpus corpus;

  std::vector<std::size_t> name_ids(max_names);
  for (std::size_t i = 0; i < max_names; ++i) name_ids[i] = i;
  rng.shuffle(name_ids);
  for (std::size_t i = 0; i < cfg.num_concepts; ++i) {
    const auto id = name_ids[i];
    const std::string mod = kModifiers[id / kBases.size()];
    const std::string base = kBases[id % kBases.size()];
    char cui[16];
    std::snprintf(cui, sizeof cui, "C%07zu", 1000 + i * 37);
    Concept c{cui, mod + " " + base, "", {}};
    c.semantic_type = rng.uniform() < 0.65 ? pick(rng, kDiagnosticTypes) : pick(rng, kOtherTypes);
    if (rng.uniform() < 0.3) c.synonyms.push_back(base + ", " + mod);
    corpus.concepts.push_back(std::move(c));
  }

  std::set<RelationEdge> edges;
  for (std::size_t i = 0; i < cfg.num_concepts; ++i) {
    const auto degree = 1 + rng.below(cfg.max_out_degree);
    for (std::size_t e = 0; e < degree; ++e) {
      auto j = rng.below(cfg.num_concepts);
      if (j == i) continue;
      edges.insert({corpus.concepts[i].cui, pick(rng, kRelations), corpus.concepts[j].cui});
    }
  }
  corpus.edges.assign(edges.begin(), edges.end());

  // Reverse adjacency for picking starts that reach a chosen diagnosis.
  std::vector<std::vector<std::size_t>> preds(cfg.num_concepts);
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < cfg.num_concepts; ++i) idx[corpus.concepts[i].cui] = i;
  for (const auto& e : corpus.edges) preds[idx[e.dst]].push_back(idx[e.src]);

  std::vector<std::size_t> diag;
  for (std::size_t i = 0; i < cfg.num_concepts; ++i)
    if (diagnostic(corpus.concepts[i])) diag.push_back(i);

  for (std::size_t n = 0; n < cfg.num_notes; ++n) {
    Note note;
    char id[16];
    std::snprintf(id, sizeof id, "note%04zu", n);
    note.note_id = id;

    std::size_t gold = 0;
    std::vector<std::size_t> ancestors;
    for (int attempt = 0; attempt < 1000 && ancestors.empty(); ++attempt) {
      gold = diag[rng.below(diag.size())];
      std::set<std::size_t> anc;
      for (auto p : preds[gold]) {
        if (diagnostic(corpus.concepts[p])) anc.insert(p);
        for (auto q : preds[p])
          if (q != gold && diagnostic(corpus.concepts[q])) anc.insert(q);
      }
      anc.erase(gold);
      ancestors.assign(anc.begin(), anc.end());
    }
    if (ancestors.empty()) throw InvariantError("synthetic graph has no reachable diagnosis");
    note.gold_diagnoses.push_back(corpus.concepts[gold].cui);

    rng.shuffle(ancestors);
    const auto n_starts = std::min<std::size_t>(ancestors.size(), 1 + rng.below(3));
    std::vector<std::string> mentions;
    for (std::size_t s = 0; s < n_starts; ++s) mentions.push_back(corpus.concepts[ancestors[s]].preferred_name);
    const auto n_distract = 1 + rng.below(3);
    for (std::size_t s = 0; s < n_distract; ++s)
      mentions.push_back(corpus.concepts[diag[rng.below(diag.size())]].preferred_name);
    mentions.push_back(corpus.concepts[rng.below(cfg.num_concepts)].preferred_name);
    rng.shuffle(mentions);

    std::string text = filler(rng, 2 + rng.below(3));
    for (const auto& m : mentions) text += ". " + filler(rng, 1 + rng.below(3)) + " " + m;
    if (rng.uniform() < cfg.gold_mention_rate)
      text += ". assessment: " + corpus.concepts[gold].preferred_name + " likely";
    text += ". " + filler(rng, 2 + rng.below(4)) + ".";
    note.text = std::move(text);
    corpus.notes.push_back(std::move(note));
  }
  return corpus;
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::string concepts, edges;
  for (const auto& c : corpus.concepts) {
    concepts += c.cui + "\t" + c.preferred_name + "\t" + c.semantic_type + "\t";
    for (std::size_t i = 0; i < c.synonyms.size(); ++i) concepts += (i ? ";" : "") + c.synonyms[i];
    concepts += "\n";
  }
  for (const auto& e : corpus.edges) edges += e.src + "\t" + e.relation + "\t" + e.dst + "\n";
  write_file_atomic(dir / "concepts.tsv", concepts);
  write_file_atomic(dir / "edges.tsv", edges);
  write_file_atomic(dir / "notes.jsonl", notes_to_jsonl(corpus.notes));
}

}  // namespace kgpf

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kgpf Authors

#include "kgpf/matcher.hpp"

#include <algorithm>
#include <tuple>

#include "kgpf/error.hpp"
#include "kgpf/text.hpp"

namespace kgpf {

TermIndex TermIndex::build(const KnowledgeGraph& graph, MatcherSettings settings) {
  if (settings.n_max < 1 || settings.n_max > 10) throw UsageError("matcher n_max must be in [1, 10]");
  if (!(settings.threshold > 0.0 && settings.threshold <= 1.0))
    throw UsageError("matcher threshold must be in (0, 1]");
  TermIndex idx;
  idx.settings_ = settings;
  const auto add = [&](std::string_view term, const std::string& cui) {
    auto key = normalize_term(term);
    if (key.empty()) return;
    idx.entries_[key].insert(cui);
  };
  for (const auto& c : graph.concepts()) {
    add(c.preferred_name, c.cui);
    for (const auto& s : c.synonyms) add(s, c.cui);
  }
  for (const auto& [key, cuis] : idx.entries_) {
    auto toks = tokenize_words(key);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    for (auto& t : toks) idx.keys_by_token_[t].push_back(key);
  }
  return idx;
}

std::set<std::string> TermIndex::candidates(const std::vector<std::string>& tokens) const {
  std::set<std::string> out;
  for (const auto& t : tokens) {
    const auto it = keys_by_token_.find(t);
    if (it == keys_by_token_.end()) continue;
    out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

double token_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<Mention> extract_mentions(const TermIndex& index, std::string_view note_text) {
  const auto tokens = tokenize(note_text);
  if (tokens.empty() || index.empty()) return {};

  // Best score per (span, cui).
  std::map<std::tuple<std::size_t, std::size_t, std::string>, Mention> best;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::vector<std::string> window;
    for (std::size_t n = 1; n <= index.n_max() && i + n <= tokens.size(); ++n) {
      window.push_back(tokens[i + n - 1].text);
      const Span span{tokens[i].begin, tokens[i + n - 1].end};
      for (const auto& key : index.candidates(window)) {
        const double score = token_jaccard(window, tokenize_words(key));
        if (score < index.threshold()) continue;
        for (const auto& cui : index.entries().at(key)) {
          auto slot = std::make_tuple(span.begin, span.end, cui);
          auto it = best.find(slot);
          if (it == best.end() || score > it->second.score) {
            best[slot] = Mention{cui, span, std::string(note_text.substr(span.begin, span.end - span.begin)), key,
                                 score};
          }
        }
      }
    }
  }

  std::vector<Mention> ranked;
  ranked.reserve(best.size());
  for (auto& [_, m] : best) ranked.push_back(std::move(m));
  std::sort(ranked.begin(), ranked.end(), [](const Mention& a, const Mention& b) {
    const auto la = a.span.end - a.span.begin, lb = b.span.end - b.span.begin;
    if (a.score != b.score) return a.score > b.score;
    if (la != lb) return la > lb;
    if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
    return a.cui < b.cui;
  });

  // Greedy: a span is accepted unless it overlaps a differently-shaped accepted span.
  std::vector<Mention> kept;
  for (auto& m : ranked) {
    bool blocked = false;
    for (const auto& k : kept) {
      const bool overlap = m.span.begin < k.span.end && k.span.begin < m.span.end;
      if (overlap && !(m.span == k.span)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) kept.push_back(std::move(m));
  }
  std::sort(kept.begin(), kept.end(), [](const Mention& a, const Mention& b) {
    return std::tie(a.span.begin, a.span.end, a.cui) < std::tie(b.span.begin, b.span.end, b.cui);
  });
  return kept;
}

}  // namespace kgpf

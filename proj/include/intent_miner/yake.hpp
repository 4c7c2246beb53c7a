#pragma once

// YAKE unsupervised keyword extraction (Campos et al.), used as the baseline
// thread summarizer. Lower scores mean more important phrases.
//
// Per term t (lowercased), over the whole text:
//   WCase   = max(TF_acronym, TF_proper) / (1 + ln TF)
//   WPos    = ln(ln(3 + median of the sentence ids containing t))
//   WFreq   = TF / (mean + std of non-stopword TFs)
//   WRel    = (0.5 + PL * TF/maxTF) + (0.5 + PR * TF/maxTF)
//             PL = distinct left neighbours / left co-occurrences (PR likewise)
//   WSpread = sentences containing t / number of sentences
//   H(t)    = WPos * WRel / (WCase + WFreq/WRel + WSpread/WRel)
// Per candidate n-gram kw with occurrence count TF(kw):
//   S(kw)   = prod H / ((1 + sum H) * TF(kw))
// where an interior stopword contributes (2 - p) to the product and -(1 - p)
// to the sum, p being the product of the bigram probabilities linking it to
// its neighbours.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "intent_miner/error.hpp"
#include "intent_miner/stopwords.hpp"
#include "intent_miner/text.hpp"

namespace intent_miner {

struct YakeConfig {
  std::set<int> ngram_sizes{2, 3};
  std::size_t top_k = 10;
  double dedup_threshold = 0.9;
  int window = 1;

  void validate() const {
    if (ngram_sizes.empty()) throw Error("yake: no n-gram sizes");
    for (int n : ngram_sizes)
      if (n < 1 || n > 5) throw Error("yake: n-gram sizes must lie in 1..5");
    if (top_k < 1) throw Error("yake: top_k must be >= 1");
    if (!(dedup_threshold > 0.0 && dedup_threshold <= 1.0)) throw Error("yake: dedup threshold must lie in (0, 1]");
    if (window < 1) throw Error("yake: co-occurrence window must be >= 1");
  }
};

struct YakeKeyword {
  std::string text;
  double score = 0.0;

  bool operator==(const YakeKeyword&) const = default;
};

namespace detail {

enum class YakeTag : char { digit = 'd', unusual = 'u', acronym = 'a', proper = 'n', plain = 'p' };

inline YakeTag yake_tag(std::string_view w, std::size_t position_in_sentence) {
  std::string_view digits = w;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
  if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return YakeTag::digit;
  std::size_t n_digit = 0, n_alpha = 0, n_punct = 0, n_upper = 0;
  for (char c : w) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isdigit(u)) ++n_digit;
    else if (std::isalpha(u) || u >= 0x80) ++n_alpha;
    else ++n_punct;
    if (std::isupper(u)) ++n_upper;
  }
  if ((n_digit > 0 && n_alpha > 0) || (n_digit == 0 && n_alpha == 0) || n_punct > 1) return YakeTag::unusual;
  if (n_upper == w.size()) return YakeTag::acronym;
  if (position_in_sentence > 0 && std::isupper(static_cast<unsigned char>(w[0]))) return YakeTag::proper;
  return YakeTag::plain;
}

inline bool discarded(YakeTag t) { return t == YakeTag::digit || t == YakeTag::unusual; }

struct YakeTerm {
  double tf = 0.0, tf_acronym = 0.0, tf_proper = 0.0;
  std::set<std::size_t> sentences;
  std::map<std::size_t, double> out_edges, in_edges;  // neighbour term -> co-occurrence count
  bool stopword = false;
  double h = 0.0;
};

struct YakeCandidate {
  std::vector<std::size_t> terms;
  double tf = 0.0;
  bool clean_occurrence = false;  // some occurrence without digit/unusual tokens
};

}  // namespace detail

inline std::vector<YakeKeyword> yake_extract(std::string_view text, const YakeConfig& config,
                                             const StopwordSet& stopwords) {
  config.validate();
  const auto sentences = text::segment(text);
  if (sentences.empty()) return {};

  std::vector<detail::YakeTerm> terms;
  std::unordered_map<std::string, std::size_t> term_id;
  std::vector<std::string> cand_order;
  std::unordered_map<std::string, detail::YakeCandidate> cands;
  const int max_n = *config.ngram_sizes.rbegin();

  auto intern = [&](const std::string& word) {
    auto key = text::to_lower(word);
    auto [it, inserted] = term_id.emplace(key, terms.size());
    if (inserted) {
      detail::YakeTerm t;
      std::string stripped;
      for (char c : key)
        if (c != '\'' && c != '-' && c != '_') stripped.push_back(c);
      t.stopword = stopwords.contains(key) || stripped.size() < 3;
      terms.push_back(std::move(t));
    }
    return it->second;
  };

  for (std::size_t s = 0; s < sentences.size(); ++s) {
    std::size_t position = 0;
    for (const auto& block : sentences[s]) {
      struct Seen {
        detail::YakeTag tag;
        std::size_t term;
        std::string lower;
      };
      std::vector<Seen> prev;
      for (const auto& word : block) {
        const auto tag = detail::yake_tag(word, position);
        const auto id = intern(word);
        auto& term = terms[id];
        term.tf += 1.0;
        if (tag == detail::YakeTag::acronym) term.tf_acronym += 1.0;
        if (tag == detail::YakeTag::proper) term.tf_proper += 1.0;
        term.sentences.insert(s);

        if (!detail::discarded(tag)) {
          const std::size_t from = prev.size() > static_cast<std::size_t>(config.window)
                                       ? prev.size() - static_cast<std::size_t>(config.window)
                                       : 0;
          for (std::size_t w = from; w < prev.size(); ++w) {
            if (detail::discarded(prev[w].tag)) continue;
            terms[prev[w].term].out_edges[id] += 1.0;
            terms[id].in_edges[prev[w].term] += 1.0;
          }
        }

        const std::string lower = text::to_lower(word);
        for (int n = 1; n <= max_n; ++n) {
          if (static_cast<std::size_t>(n - 1) > prev.size()) break;
          if (!config.ngram_sizes.contains(n)) continue;
          std::vector<std::size_t> ids;
          std::string key;
          bool clean = !detail::discarded(tag);
          for (std::size_t w = prev.size() - static_cast<std::size_t>(n - 1); w < prev.size(); ++w) {
            ids.push_back(prev[w].term);
            key += prev[w].lower;
            key += ' ';
            clean = clean && !detail::discarded(prev[w].tag);
          }
          ids.push_back(id);
          key += lower;
          auto [it, inserted] = cands.try_emplace(key);
          if (inserted) {
            it->second.terms = std::move(ids);
            cand_order.push_back(key);
          }
          it->second.tf += 1.0;
          it->second.clean_occurrence = it->second.clean_occurrence || clean;
        }
        prev.push_back(Seen{tag, id, lower});
        ++position;
      }
    }
  }

  double max_tf = 0.0, sum = 0.0;
  std::size_t n_valid = 0;
  for (const auto& t : terms) {
    max_tf = std::max(max_tf, t.tf);
    if (!t.stopword) {
      sum += t.tf;
      ++n_valid;
    }
  }
  double avg_tf = 0.0, std_tf = 0.0;
  if (n_valid > 0) {
    avg_tf = sum / static_cast<double>(n_valid);
    double sq = 0.0;
    for (const auto& t : terms)
      if (!t.stopword) sq += (t.tf - avg_tf) * (t.tf - avg_tf);
    std_tf = std::sqrt(sq / static_cast<double>(n_valid));
  }
  const double n_sentences = static_cast<double>(sentences.size());

  for (auto& t : terms) {
    auto spread = [](const std::map<std::size_t, double>& edges) {
      double total = 0.0;
      for (const auto& [_, c] : edges) total += c;
      return total == 0.0 ? 0.0 : static_cast<double>(edges.size()) / total;
    };
    const double rel = (0.5 + spread(t.in_edges) * (t.tf / max_tf)) + (0.5 + spread(t.out_edges) * (t.tf / max_tf));
    const double freq = (avg_tf + std_tf) > 0.0 ? t.tf / (avg_tf + std_tf) : 0.0;
    const double dispersion = static_cast<double>(t.sentences.size()) / n_sentences;
    const double casing = std::max(t.tf_acronym, t.tf_proper) / (1.0 + std::log(t.tf));
    std::vector<std::size_t> ids(t.sentences.begin(), t.sentences.end());
    const std::size_t m = ids.size();
    const double median = m % 2 == 1 ? static_cast<double>(ids[m / 2])
                                     : (static_cast<double>(ids[m / 2 - 1]) + static_cast<double>(ids[m / 2])) / 2.0;
    const double position = std::log(std::log(3.0 + median));
    t.h = (position * rel) / (casing + freq / rel + dispersion / rel);
  }

  auto edge = [&](std::size_t from, std::size_t to) {
    const auto& e = terms[from].out_edges;
    auto it = e.find(to);
    return it == e.end() ? 0.0 : it->second;
  };

  std::vector<YakeKeyword> scored;
  for (const auto& key : cand_order) {
    const auto& c = cands.at(key);
    if (!c.clean_occurrence || terms[c.terms.front()].stopword || terms[c.terms.back()].stopword) continue;
    double prod = 1.0, sum_h = 0.0;
    for (std::size_t i = 0; i < c.terms.size(); ++i) {
      const auto& t = terms[c.terms[i]];
      if (!t.stopword) {
        sum_h += t.h;
        prod *= t.h;
        continue;
      }
      const double left = edge(c.terms[i - 1], c.terms[i]) / terms[c.terms[i - 1]].tf;
      const double right = edge(c.terms[i], c.terms[i + 1]) / terms[c.terms[i + 1]].tf;
      const double p = left * right;
      prod *= 1.0 + (1.0 - p);
      sum_h -= 1.0 - p;
    }
    const double score = prod / ((sum_h + 1.0) * c.tf);
    // Long runs of interior stopwords can push the denominator negative.
    if (!std::isfinite(score) || score <= 0.0) continue;
    scored.push_back(YakeKeyword{key, score});
  }

  std::sort(scored.begin(), scored.end(), [](const YakeKeyword& a, const YakeKeyword& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.text < b.text;
  });

  std::vector<YakeKeyword> kept;
  for (auto& kw : scored) {
    if (kept.size() >= config.top_k) break;
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const YakeKeyword& k) {
      return text::edit_similarity(k.text, kw.text) > config.dedup_threshold;
    });
    if (!duplicate) kept.push_back(std::move(kw));
  }
  return kept;
}

inline std::vector<YakeKeyword> yake_extract(std::string_view text, const YakeConfig& config = {}) {
  return yake_extract(text, config, bundled_stopwords());
}

}  // namespace intent_miner

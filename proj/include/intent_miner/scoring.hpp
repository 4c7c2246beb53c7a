#pragma once

// Composite TF-IDF model and the intent scoring function.
//
// With tf(w,d) the raw count of w in document d:
//   idf(w) = ln((1 + n_docs) / (1 + df(w))) + 1
//   TI_w   = sum_d tf(w,d) * idf(w)
// A phrase scores the mean TI over its words; out-of-vocabulary words add 0
// to the sum and 1 to the denominator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "intent_miner/binary_io.hpp"
#include "intent_miner/error.hpp"
#include "intent_miner/extraction.hpp"
#include "intent_miner/text.hpp"

namespace intent_miner {

inline constexpr std::size_t kSummaryLength = 10;

class TfIdfModel {
 public:
  TfIdfModel() = default;

  /// Vocabulary ids are assigned in lexicographic word order.
  TfIdfModel(std::size_t n_docs, std::map<std::string, double> scores) : n_docs_(n_docs) {
    words_.reserve(scores.size());
    composite_.reserve(scores.size());
    for (auto& [w, s] : scores) {
      if (!(s >= 0.0)) throw Error("composite score for '" + w + "' is negative");
      index_.emplace(w, words_.size());
      words_.push_back(w);
      composite_.push_back(s);
    }
  }

  std::size_t n_docs() const { return n_docs_; }
  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t id) const { return words_.at(id); }

  std::optional<std::size_t> id_of(std::string_view w) const {
    auto it = index_.find(std::string(w));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// TI_w, or 0 for out-of-vocabulary words.
  double composite(std::string_view w) const {
    auto id = id_of(w);
    return id ? composite_[*id] : 0.0;
  }
  double composite(std::size_t id) const { return composite_.at(id); }

  TfIdfModel scaled(double factor) const {
    std::map<std::string, double> s;
    for (std::size_t i = 0; i < words_.size(); ++i) s.emplace(words_[i], composite_[i] * factor);
    return TfIdfModel(n_docs_, std::move(s));
  }

  bool operator==(const TfIdfModel& o) const {
    return n_docs_ == o.n_docs_ && words_ == o.words_ && composite_ == o.composite_;
  }

 private:
  std::size_t n_docs_ = 0;
  std::vector<std::string> words_;
  std::vector<double> composite_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// One document per comment (its lemma sequence).
inline TfIdfModel fit_tfidf(const std::vector<std::vector<std::string>>& documents) {
  if (documents.empty()) throw Error("fit_tfidf: no documents");
  std::map<std::string, std::pair<std::size_t, std::size_t>> stats;  // word -> (total count, df)
  bool any_word = false;
  for (const auto& doc : documents) {
    std::map<std::string_view, std::size_t> counts;
    for (const auto& w : doc) ++counts[w];
    for (const auto& [w, c] : counts) {
      auto& st = stats[std::string(w)];
      st.first += c;
      st.second += 1;
      any_word = true;
    }
  }
  if (!any_word) throw Error("fit_tfidf: every document is empty");
  const double n = static_cast<double>(documents.size());
  std::map<std::string, double> scores;
  for (const auto& [w, st] : stats) {
    const double idf = std::log((1.0 + n) / (1.0 + static_cast<double>(st.second))) + 1.0;
    scores.emplace(w, static_cast<double>(st.first) * idf);
  }
  return TfIdfModel(documents.size(), std::move(scores));
}

/// Intent score f: mean composite TF-IDF over the phrase's words.
inline double score_words(std::span<const std::string> words, const TfIdfModel& model) {
  if (words.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& w : words) sum += model.composite(w);
  return sum / static_cast<double>(words.size());
}

inline double score_phrase(const ActionObjectPair& pair, const TfIdfModel& model) {
  const auto w = pair.words();
  return score_words(w, model);
}

// model.tfidf: "IMTFIDF1", u32 version, u64 n_docs, u64 |V|, then (word, TI) by id.
inline constexpr std::string_view kModelMagic = "IMTFIDF1";
inline constexpr std::uint32_t kModelVersion = 1;

inline void save_model(std::ostream& out, const TfIdfModel& m) {
  binary::Writer w(out);
  w.magic(kModelMagic);
  w.u32(kModelVersion);
  w.u64(m.n_docs());
  w.u64(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    w.str(m.word(i));
    w.f64(m.composite(i));
  }
}

inline TfIdfModel load_model(std::istream& in) {
  binary::Reader r(in, "model.tfidf");
  r.expect_magic(kModelMagic);
  if (const auto v = r.u32(); v != kModelVersion) throw Error("model.tfidf: unsupported version " + std::to_string(v));
  const auto n_docs = r.u64();
  const auto n = r.u64();
  std::map<std::string, double> scores;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto w = r.str();
    const double s = r.f64();
    scores.emplace(std::move(w), s);
  }
  if (scores.size() != n) throw Error("model.tfidf: duplicate vocabulary entries");
  return TfIdfModel(n_docs, std::move(scores));
}

inline void save_model(const std::string& path, const TfIdfModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_model(out, m);
}

inline TfIdfModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_model(in);
}

struct ScoredPhrase {
  ActionObjectPair pair;
  double score = 0.0;
  std::size_t count = 1;
};

struct ThreadSummary {
  std::string thread_id;
  std::map<PairRule, std::vector<ScoredPhrase>> per_rule;  // every rule present, possibly empty
};

/// Top-m phrases per rule. `pairs` are the deduplicated pairs of one thread
/// in occurrence order; equal scores keep the earlier occurrence first, then
/// compare action lemmas.
inline ThreadSummary summarize_thread(std::string thread_id, std::span<const CountedPair> pairs,
                                      const TfIdfModel& model, std::size_t m = kSummaryLength) {
  ThreadSummary summary{std::move(thread_id), {}};
  struct Ranked {
    std::size_t position;
    ScoredPhrase phrase;
  };
  std::map<PairRule, std::vector<Ranked>> buckets;
  for (auto r : kAllRules) buckets[r];
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& cp = pairs[i];
    buckets[cp.pair.rule].push_back(Ranked{i, ScoredPhrase{cp.pair, score_phrase(cp.pair, model), cp.count}});
  }
  for (auto& [rule, list] : buckets) {
    std::sort(list.begin(), list.end(), [](const Ranked& a, const Ranked& b) {
      if (a.phrase.score != b.phrase.score) return a.phrase.score > b.phrase.score;
      if (a.position != b.position) return a.position < b.position;
      return a.phrase.pair.action_lemma < b.phrase.pair.action_lemma;
    });
    auto& dst = summary.per_rule[rule];
    for (std::size_t i = 0; i < list.size() && i < m; ++i) dst.push_back(std::move(list[i].phrase));
  }
  return summary;
}

/// A phrase as stored in summary JSONL: words separated by single spaces, one
/// UPOS tag per word.
struct SummaryPhrase {
  std::string text;
  double score = 0.0;
  std::vector<std::string> upos;

  std::vector<std::string> words() const { return text::split(text, ' '); }

  bool operator==(const SummaryPhrase&) const = default;
};

/// One line of summary JSONL: the ranked phrase list of one thread under one
/// rule label (VN, AN, CN, VO, AP, NEG, VR or YAKE).
struct SummaryRecord {
  std::string thread_id;
  std::string rule;
  std::vector<SummaryPhrase> phrases;

  bool operator==(const SummaryRecord&) const = default;
};

inline std::vector<SummaryRecord> to_records(const ThreadSummary& s) {
  std::vector<SummaryRecord> out;
  for (auto r : kAllRules) {
    SummaryRecord rec{s.thread_id, std::string(to_string(r)), {}};
    if (auto it = s.per_rule.find(r); it != s.per_rule.end())
      for (const auto& p : it->second) rec.phrases.push_back(SummaryPhrase{p.pair.text(), p.score, p.pair.word_upos()});
    out.push_back(std::move(rec));
  }
  return out;
}

inline nlohmann::ordered_json to_json(const SummaryRecord& r) {
  nlohmann::ordered_json j;
  j["thread_id"] = r.thread_id;
  j["rule"] = r.rule;
  j["phrases"] = nlohmann::ordered_json::array();
  for (const auto& p : r.phrases) {
    nlohmann::ordered_json pj;
    pj["text"] = p.text;
    pj["score"] = p.score;
    pj["upos"] = p.upos;
    j["phrases"].push_back(std::move(pj));
  }
  return j;
}

inline SummaryRecord summary_from_json(const nlohmann::json& j) {
  SummaryRecord r;
  r.thread_id = j.at("thread_id").get<std::string>();
  r.rule = j.at("rule").get<std::string>();
  for (const auto& pj : j.at("phrases")) {
    SummaryPhrase p;
    p.text = pj.at("text").get<std::string>();
    p.score = pj.at("score").get<double>();
    if (pj.contains("upos")) p.upos = pj["upos"].get<std::vector<std::string>>();
    const auto n_words = p.words().size();
    if (p.upos.size() != n_words) p.upos.resize(n_words, "NOUN");
    r.phrases.push_back(std::move(p));
  }
  return r;
}

inline void write_summaries(std::ostream& out, std::span<const SummaryRecord> records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

inline std::vector<SummaryRecord> read_summaries(std::istream& in) {
  std::vector<SummaryRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(summary_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error("summaries line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace intent_miner

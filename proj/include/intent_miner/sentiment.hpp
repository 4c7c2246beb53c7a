#pragma once

// Comment sentiment and aspect sentiment over intent phrases.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "intent_miner/error.hpp"
#include "intent_miner/extraction.hpp"
#include "intent_miner/scoring.hpp"
#include "intent_miner/text.hpp"

namespace intent_miner {

namespace detail {

// Hand-curated valences for customer discussion of cards, banking and travel.
inline constexpr std::pair<std::string_view, double> kBundledValence[] = {
    {"great", 0.8},       {"good", 0.6},        {"excellent", 0.9},   {"amazing", 0.9},    {"awesome", 0.8},
    {"best", 0.8},        {"better", 0.5},      {"nice", 0.5},        {"love", 0.8},       {"like", 0.3},
    {"happy", 0.7},       {"glad", 0.6},        {"easy", 0.5},        {"helpful", 0.6},    {"useful", 0.5},
    {"valuable", 0.6},    {"worth", 0.5},       {"generous", 0.7},    {"fast", 0.4},       {"quick", 0.4},
    {"smooth", 0.5},      {"friendly", 0.6},    {"recommend", 0.6},   {"enjoy", 0.6},      {"appreciate", 0.6},
    {"thank", 0.5},       {"thanks", 0.5},      {"perfect", 0.9},     {"fantastic", 0.9},  {"solid", 0.4},
    {"reliable", 0.5},    {"convenient", 0.5},  {"free", 0.3},        {"bonus", 0.3},      {"reward", 0.3},
    {"win", 0.5},         {"benefit", 0.3},     {"approve", 0.5},     {"approved", 0.5},   {"upgrade", 0.3},
    {"maximize", 0.3},    {"save", 0.3},        {"secure", 0.4},      {"safe", 0.4},       {"fair", 0.3},
    {"satisfied", 0.6},   {"impressed", 0.6},   {"pleasant", 0.5},    {"wonderful", 0.8},  {"worthwhile", 0.5},
    {"lucrative", 0.6},   {"favorite", 0.6},    {"cool", 0.4},        {"fine", 0.2},       {"okay", 0.1},
    {"interesting", 0.3}, {"improve", 0.4},     {"improved", 0.4},    {"resolve", 0.4},    {"resolved", 0.4},
    {"refund", 0.2},      {"luxury", 0.4},      {"premium", 0.3},     {"elite", 0.4},      {"exclusive", 0.3},
    {"bad", -0.6},        {"worse", -0.6},      {"worst", -0.9},      {"terrible", -0.9},  {"awful", -0.9},
    {"horrible", -0.9},   {"poor", -0.6},       {"hate", -0.8},       {"annoying", -0.6},  {"annoyed", -0.6},
    {"frustrating", -0.7},{"frustrated", -0.7}, {"angry", -0.7},      {"upset", -0.6},     {"disappointed", -0.7},
    {"disappointing", -0.7},{"useless", -0.7},  {"waste", -0.6},      {"expensive", -0.4}, {"overpriced", -0.6},
    {"slow", -0.4},       {"difficult", -0.4},  {"hard", -0.3},       {"problem", -0.4},   {"issue", -0.3},
    {"fraud", -0.7},      {"scam", -0.8},       {"fee", -0.2},        {"penalty", -0.5},   {"deny", -0.6},
    {"denied", -0.6},     {"decline", -0.5},    {"declined", -0.5},   {"reject", -0.6},    {"rejected", -0.6},
    {"cancel", -0.3},     {"close", -0.2},      {"lose", -0.5},       {"lost", -0.5},      {"losing", -0.5},
    {"fail", -0.6},       {"failed", -0.6},     {"error", -0.5},      {"wrong", -0.5},     {"broken", -0.6},
    {"confusing", -0.5},  {"confused", -0.4},   {"rude", -0.7},       {"unfair", -0.6},    {"unhelpful", -0.6},
    {"complain", -0.5},   {"complaint", -0.5},  {"charge", -0.2},     {"debt", -0.4},      {"late", -0.3},
    {"risk", -0.3},       {"risky", -0.4},      {"shady", -0.6},      {"sucks", -0.8},     {"suck", -0.8},
    {"ridiculous", -0.6}, {"painful", -0.6},    {"nightmare", -0.9},  {"hassle", -0.5},    {"stuck", -0.5},
    {"devalue", -0.6},    {"devaluation", -0.6},
};

inline constexpr std::string_view kBundledNegators[] = {
    "not", "n't", "no", "never", "none", "nobody", "nothing", "neither", "nor", "without", "hardly"};

}  // namespace detail

struct SentimentLexicon {
  std::unordered_map<std::string, double> valence;
  std::unordered_set<std::string> negators;

  static SentimentLexicon bundled() {
    SentimentLexicon lex;
    for (const auto& [w, v] : detail::kBundledValence) lex.valence.emplace(w, v);
    for (auto n : detail::kBundledNegators) lex.negators.emplace(n);
    return lex;
  }

  /// TSV "lemma<TAB>valence" lines; '#' starts a comment line. Negators are
  /// the bundled set.
  static SentimentLexicon load_tsv(std::istream& in) {
    SentimentLexicon lex;
    for (auto n : detail::kBundledNegators) lex.negators.emplace(n);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      const auto cols = text::split(line, '\t');
      if (cols.size() < 2) throw Error("lexicon line " + std::to_string(line_no) + ": expected lemma<TAB>valence");
      double v = 0.0;
      try {
        v = std::stod(cols[1]);
      } catch (const std::exception&) {
        throw Error("lexicon line " + std::to_string(line_no) + ": bad valence '" + cols[1] + "'");
      }
      if (!(v >= -1.0 && v <= 1.0))
        throw Error("lexicon line " + std::to_string(line_no) + ": valence outside [-1, 1]");
      lex.valence[text::to_lower(cols[0])] = v;
    }
    return lex;
  }
};

/// Pluggable comment-level sentiment backend; scores lie in [-1, 1].
class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  virtual double score(std::span<const std::string> lemmas) const = 0;
};

/// Mean valence of lexicon lemmas, each flipped when a negator sits in the
/// three preceding tokens. 0 when nothing matches.
class LexiconScorer final : public SentimentScorer {
 public:
  explicit LexiconScorer(SentimentLexicon lexicon) : lex_(std::move(lexicon)) {}

  double score(std::span<const std::string> lemmas) const override {
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < lemmas.size(); ++i) {
      auto it = lex_.valence.find(lemmas[i]);
      if (it == lex_.valence.end()) continue;
      double v = it->second;
      for (std::size_t j = i >= 3 ? i - 3 : 0; j < i; ++j) {
        if (lex_.negators.contains(lemmas[j])) {
          v = -v;
          break;
        }
      }
      sum += v;
      ++hits;
    }
    if (hits == 0) return 0.0;
    return std::clamp(sum / static_cast<double>(hits), -1.0, 1.0);
  }

  const SentimentLexicon& lexicon() const { return lex_; }

 private:
  SentimentLexicon lex_;
};

struct CommentSentiment {
  std::string comment_id;
  double score = 0.0;
};

inline CommentSentiment score_comment(std::string comment_id, std::span<const std::string> lemmas,
                                      const SentimentScorer& scorer) {
  return CommentSentiment{std::move(comment_id), std::clamp(scorer.score(lemmas), -1.0, 1.0)};
}

/// A scored comment as seen by aspect matching.
struct ScoredComment {
  std::string comment_id;
  std::vector<std::string> lemmas;
  double score = 0.0;
};

/// Does the comment contain every word of the phrase (with multiplicity)?
/// window == 0: anywhere in the comment; window N: inside some run of N
/// consecutive tokens.
inline bool contains_aspect(std::span<const std::string> phrase_words, std::span<const std::string> lemmas,
                            std::size_t window = 0) {
  if (phrase_words.empty()) return false;
  std::map<std::string_view, long> need;
  for (const auto& w : phrase_words) ++need[w];

  if (window == 0) {
    for (const auto& l : lemmas)
      if (auto it = need.find(l); it != need.end()) --it->second;
    return std::all_of(need.begin(), need.end(), [](const auto& kv) { return kv.second <= 0; });
  }
  if (window < phrase_words.size() || lemmas.empty()) return false;

  std::size_t missing = need.size();
  auto add = [&](std::string_view l) {
    if (auto it = need.find(l); it != need.end() && --it->second == 0) --missing;
  };
  auto remove = [&](std::string_view l) {
    if (auto it = need.find(l); it != need.end() && it->second++ == 0) ++missing;
  };
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    add(lemmas[i]);
    if (i >= window) remove(lemmas[i - window]);
    if (missing == 0) return true;
  }
  return false;
}

struct AspectScore {
  ActionObjectPair pair;
  std::string text;
  double mean = 0.0;
  double variance = 0.0;  // population
  std::size_t n_occurrences = 0;
};

/// Aspect sentiment g: mean and population variance of the scores of the
/// comments that contain the phrase. nullopt when no comment does.
inline std::optional<AspectScore> score_aspect(const ActionObjectPair& pair, std::span<const ScoredComment> comments,
                                               std::size_t window = 0) {
  const auto words = pair.words();
  std::vector<double> hits;
  for (const auto& c : comments)
    if (contains_aspect(words, c.lemmas, window)) hits.push_back(c.score);
  if (hits.empty()) return std::nullopt;
  const double n = static_cast<double>(hits.size());
  double mean = 0.0;
  for (double h : hits) mean += h;
  mean /= n;
  double var = 0.0;
  for (double h : hits) var += (h - mean) * (h - mean);
  var /= n;
  return AspectScore{pair, pair.text(), mean, var, hits.size()};
}

enum class RankMode { positive, variant, negative };

inline std::string_view to_string(RankMode m) {
  switch (m) {
    case RankMode::positive: return "positive";
    case RankMode::variant: return "variant";
    case RankMode::negative: return "negative";
  }
  return "positive";
}

/// Sorted copy; ties go to more occurrences, then phrase text.
inline std::vector<AspectScore> rank_aspects(std::vector<AspectScore> aspects, RankMode mode,
                                             std::size_t limit = std::numeric_limits<std::size_t>::max()) {
  auto key = [mode](const AspectScore& a) {
    switch (mode) {
      case RankMode::positive: return a.mean;
      case RankMode::variant: return a.variance;
      case RankMode::negative: return -a.mean;
    }
    return a.mean;
  };
  std::sort(aspects.begin(), aspects.end(), [&](const AspectScore& a, const AspectScore& b) {
    const double ka = key(a), kb = key(b);
    if (ka != kb) return ka > kb;
    if (a.n_occurrences != b.n_occurrences) return a.n_occurrences > b.n_occurrences;
    return a.text < b.text;
  });
  if (aspects.size() > limit) aspects.resize(limit);
  return aspects;
}

struct ThreadAspects {
  std::string thread_id;
  std::vector<AspectScore> aspects;  // every matched aspect, first-occurrence order
  std::vector<AspectScore> positive, variant, negative;  // top kSummaryLength each
};

/// Pools the thread's pairs across all rules (one aspect per distinct phrase
/// text), scores them and builds the three rankings.
inline ThreadAspects analyze_thread(std::string thread_id, std::span<const CountedPair> pairs,
                                    std::span<const ScoredComment> comments, std::size_t window = 0) {
  ThreadAspects out{std::move(thread_id), {}, {}, {}, {}};
  std::unordered_set<std::string> seen;
  for (const auto& cp : pairs) {
    if (!seen.insert(cp.pair.text()).second) continue;
    if (auto a = score_aspect(cp.pair, comments, window)) out.aspects.push_back(std::move(*a));
  }
  out.positive = rank_aspects(out.aspects, RankMode::positive, kSummaryLength);
  out.variant = rank_aspects(out.aspects, RankMode::variant, kSummaryLength);
  out.negative = rank_aspects(out.aspects, RankMode::negative, kSummaryLength);
  return out;
}

/// The variant-sentiment (VR) thread representation, scored by variance.
inline SummaryRecord variant_record(const ThreadAspects& ta) {
  SummaryRecord r{ta.thread_id, "VR", {}};
  for (const auto& a : ta.variant) r.phrases.push_back(SummaryPhrase{a.text, a.variance, a.pair.word_upos()});
  return r;
}

inline nlohmann::ordered_json to_json(const ThreadAspects& ta) {
  auto aspect_json = [](const AspectScore& a) {
    nlohmann::ordered_json j;
    j["text"] = a.text;
    j["rule"] = to_string(a.pair.rule);
    j["mean"] = a.mean;
    j["variance"] = a.variance;
    j["n_occurrences"] = a.n_occurrences;
    return j;
  };
  auto texts = [](const std::vector<AspectScore>& v) {
    std::vector<std::string> t;
    for (const auto& a : v) t.push_back(a.text);
    return t;
  };
  nlohmann::ordered_json j;
  j["thread_id"] = ta.thread_id;
  j["aspects"] = nlohmann::ordered_json::array();
  for (const auto& a : ta.aspects) j["aspects"].push_back(aspect_json(a));
  j["positive"] = texts(ta.positive);
  j["variant"] = texts(ta.variant);
  j["negative"] = texts(ta.negative);
  return j;
}

}  // namespace intent_miner

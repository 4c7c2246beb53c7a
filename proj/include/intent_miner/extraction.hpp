#pragma once

// Action-Object pair generation over dependency-annotated sentences.
//
// Rules (token indices are 1-based within one sentence, proximity = |i - j| <= 3):
//   VN  verb + noun by proximity, either order, minus nouns the same verb
//       already claims through a VO edge
//   AN  adjective + noun by proximity
//   CN  maximal compound-noun run of >= 2 tokens; first noun is the action
//   VO  verb + its obj/dobj noun dependent; object expands to its noun run
//   AP  acomp token + pobj token whose preposition hangs off the acomp token
//       or off the acomp token's head
//   NEG any pair above whose action/object has a `neg` dependent, or with a
//       negator lemma within 3 tokens of the action
// PROPN counts as NOUN everywhere.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "intent_miner/annotation.hpp"
#include "intent_miner/error.hpp"
#include "intent_miner/text.hpp"

namespace intent_miner {

enum class PairRule { VN = 0, AN, CN, VO, AP, NEG };

inline constexpr std::array<PairRule, 6> kAllRules = {PairRule::VN, PairRule::AN, PairRule::CN,
                                                      PairRule::VO, PairRule::AP, PairRule::NEG};

inline constexpr int kProximity = 3;

inline std::string_view to_string(PairRule r) {
  switch (r) {
    case PairRule::VN: return "VN";
    case PairRule::AN: return "AN";
    case PairRule::CN: return "CN";
    case PairRule::VO: return "VO";
    case PairRule::AP: return "AP";
    case PairRule::NEG: return "NEG";
  }
  return "VN";
}

inline std::optional<PairRule> parse_rule(std::string_view s) {
  for (auto r : kAllRules)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

struct ActionObjectPair {
  PairRule rule = PairRule::VN;
  std::string action_lemma;
  std::vector<std::string> object_lemmas;
  std::string action_upos;
  std::vector<std::string> object_upos;
  std::string comment_id;
  int sentence_ordinal = 0;  // 0-based within the comment
  int action_index = 0;
  std::vector<int> object_indices;
  int token_distance = 0;

  std::vector<std::string> words() const {
    std::vector<std::string> w{action_lemma};
    w.insert(w.end(), object_lemmas.begin(), object_lemmas.end());
    return w;
  }
  std::vector<std::string> word_upos() const {
    std::vector<std::string> u{action_upos};
    u.insert(u.end(), object_upos.begin(), object_upos.end());
    return u;
  }
  std::string text() const { return text::join(words()); }

  bool operator==(const ActionObjectPair&) const = default;
};

inline bool is_negator_lemma(std::string_view lemma) {
  return lemma == "not" || lemma == "n't" || lemma == "never" || lemma == "no";
}

namespace detail {

class SentenceView {
 public:
  explicit SentenceView(const AnnSentence& s) : s_(s), n_(static_cast<int>(s.size())) {}

  int size() const { return n_; }
  const TokenAnn& at(int idx) const { return s_[static_cast<std::size_t>(idx - 1)]; }
  bool noun(int i) const { return is_noun_tag(at(i).upos); }
  bool verb(int i) const { return is_verb_tag(at(i).upos); }
  bool adj(int i) const { return is_adj_tag(at(i).upos); }

  // Adjacent tokens i, i+1 belong to the same compound run.
  bool linked(int i) const { return noun(i + 1) && (noun(i) || at(i).deprel == "compound"); }

 private:
  const AnnSentence& s_;
  int n_;
};

inline int distance(int a, int b) { return a > b ? a - b : b - a; }

}  // namespace detail

/// Maximal compound runs of a sentence as [first, last] index pairs.
inline std::vector<std::pair<int, int>> compound_runs(const AnnSentence& sentence) {
  detail::SentenceView s(sentence);
  std::vector<std::pair<int, int>> runs;
  int i = 1;
  while (i < s.size()) {
    if (!s.linked(i)) {
      ++i;
      continue;
    }
    int j = i;
    while (j < s.size() && s.linked(j)) ++j;
    runs.emplace_back(i, j);
    i = j;
  }
  return runs;
}

/// Pairs of one sentence, ordered by (action index, rule, object indices, distance).
inline std::vector<ActionObjectPair> extract_sentence_pairs(const AnnSentence& sentence,
                                                            const std::string& comment_id, int ordinal) {
  detail::SentenceView s(sentence);
  const int n = s.size();
  std::vector<ActionObjectPair> out;

  auto make = [&](PairRule rule, int action, std::vector<int> objects, int dist) {
    ActionObjectPair p;
    p.rule = rule;
    p.action_lemma = s.at(action).lemma;
    p.action_upos = s.at(action).upos;
    for (int o : objects) {
      p.object_lemmas.push_back(s.at(o).lemma);
      p.object_upos.push_back(s.at(o).upos);
    }
    p.comment_id = comment_id;
    p.sentence_ordinal = ordinal;
    p.action_index = action;
    p.object_indices = std::move(objects);
    p.token_distance = dist;
    out.push_back(std::move(p));
  };

  const auto runs = compound_runs(sentence);
  std::vector<int> run_of(static_cast<std::size_t>(n + 1), -1);
  for (std::size_t r = 0; r < runs.size(); ++r)
    for (int i = runs[r].first; i <= runs[r].second; ++i) run_of[static_cast<std::size_t>(i)] = static_cast<int>(r);

  // CN: runs longer than proximity + 1 are cut into consecutive segments.
  for (const auto& [first, last] : runs) {
    for (int start = first; start < last; start += kProximity + 1) {
      const int end = std::min(last, start + kProximity);
      if (end == start) break;
      std::vector<int> objects;
      for (int i = start + 1; i <= end; ++i) objects.push_back(i);
      make(PairRule::CN, start, std::move(objects), end - start);
    }
  }

  // VO, remembering which nouns each verb claims.
  std::vector<std::vector<int>> claimed(static_cast<std::size_t>(n + 1));
  for (int v = 1; v <= n; ++v) {
    if (!s.verb(v)) continue;
    for (int o = 1; o <= n; ++o) {
      const auto& t = s.at(o);
      if (t.head != v || (t.deprel != "obj" && t.deprel != "dobj") || !s.noun(o)) continue;
      if (detail::distance(v, o) > kProximity) continue;
      std::vector<int> chunk;
      if (const int r = run_of[static_cast<std::size_t>(o)]; r >= 0) {
        for (int i = runs[static_cast<std::size_t>(r)].first; i <= runs[static_cast<std::size_t>(r)].second; ++i)
          chunk.push_back(i);
      } else {
        chunk.push_back(o);
      }
      auto& c = claimed[static_cast<std::size_t>(v)];
      c.insert(c.end(), chunk.begin(), chunk.end());
      make(PairRule::VO, v, std::move(chunk), detail::distance(v, o));
    }
  }

  for (int v = 1; v <= n; ++v) {
    if (!s.verb(v)) continue;
    const auto& c = claimed[static_cast<std::size_t>(v)];
    for (int o = std::max(1, v - kProximity); o <= std::min(n, v + kProximity); ++o) {
      if (o == v || !s.noun(o) || std::find(c.begin(), c.end(), o) != c.end()) continue;
      make(PairRule::VN, v, {o}, detail::distance(v, o));
    }
  }

  for (int a = 1; a <= n; ++a) {
    if (!s.adj(a)) continue;
    for (int o = std::max(1, a - kProximity); o <= std::min(n, a + kProximity); ++o)
      if (o != a && s.noun(o)) make(PairRule::AN, a, {o}, detail::distance(a, o));
  }

  for (int a = 1; a <= n; ++a) {
    if (s.at(a).deprel != "acomp") continue;
    for (int p = std::max(1, a - kProximity); p <= std::min(n, a + kProximity); ++p) {
      if (p == a || s.at(p).deprel != "pobj") continue;
      const int q = s.at(p).head;
      if (q == 0 || s.at(q).deprel != "prep") continue;
      const int attach = s.at(q).head;
      if (attach == a || (s.at(a).head != 0 && attach == s.at(a).head))
        make(PairRule::AP, a, {p}, detail::distance(a, p));
    }
  }

  std::vector<bool> has_neg_child(static_cast<std::size_t>(n + 1), false);
  for (int i = 1; i <= n; ++i)
    if (s.at(i).deprel == "neg" && s.at(i).head > 0) has_neg_child[static_cast<std::size_t>(s.at(i).head)] = true;
  const std::size_t base = out.size();
  for (std::size_t k = 0; k < base; ++k) {
    const ActionObjectPair& p = out[k];
    bool negated = has_neg_child[static_cast<std::size_t>(p.action_index)];
    for (int o : p.object_indices) negated = negated || has_neg_child[static_cast<std::size_t>(o)];
    for (int t = std::max(1, p.action_index - kProximity); !negated && t <= std::min(n, p.action_index + kProximity);
         ++t)
      negated = t != p.action_index && is_negator_lemma(s.at(t).lemma);
    if (negated) {
      ActionObjectPair neg = p;
      neg.rule = PairRule::NEG;
      out.push_back(std::move(neg));
    }
  }

  std::sort(out.begin(), out.end(), [](const ActionObjectPair& a, const ActionObjectPair& b) {
    return std::tie(a.action_index, a.rule, a.object_indices, a.token_distance) <
           std::tie(b.action_index, b.rule, b.object_indices, b.token_distance);
  });
  return out;
}

/// All pairs of a comment, ordered by (sentence ordinal, action index).
inline std::vector<ActionObjectPair> extract_pairs(const AnnotatedComment& comment) {
  std::vector<ActionObjectPair> out;
  for (std::size_t i = 0; i < comment.sentences.size(); ++i) {
    auto pairs = extract_sentence_pairs(comment.sentences[i], comment.comment_id, static_cast<int>(i));
    out.insert(out.end(), std::make_move_iterator(pairs.begin()), std::make_move_iterator(pairs.end()));
  }
  return out;
}

struct CountedPair {
  ActionObjectPair pair;
  std::size_t count = 1;

  bool operator==(const CountedPair&) const = default;
};

/// Collapses pairs with identical (rule, action, objects) to their first
/// occurrence, counting repeats. Input order is preserved.
inline std::vector<CountedPair> dedup_pairs(std::span<const ActionObjectPair> pairs) {
  std::vector<CountedPair> out;
  std::map<std::tuple<PairRule, std::string, std::vector<std::string>>, std::size_t> seen;
  for (const auto& p : pairs) {
    auto key = std::make_tuple(p.rule, p.action_lemma, p.object_lemmas);
    if (auto it = seen.find(key); it != seen.end()) {
      ++out[it->second].count;
    } else {
      seen.emplace(std::move(key), out.size());
      out.push_back(CountedPair{p, 1});
    }
  }
  return out;
}

inline nlohmann::ordered_json to_json(const ActionObjectPair& p, std::string_view thread_id) {
  nlohmann::ordered_json j;
  j["thread_id"] = thread_id;
  j["comment_id"] = p.comment_id;
  j["sentence_ordinal"] = p.sentence_ordinal;
  j["rule"] = to_string(p.rule);
  j["action_lemma"] = p.action_lemma;
  j["object_lemmas"] = p.object_lemmas;
  j["action_upos"] = p.action_upos;
  j["object_upos"] = p.object_upos;
  j["action_index"] = p.action_index;
  j["object_indices"] = p.object_indices;
  j["token_distance"] = p.token_distance;
  j["text"] = p.text();
  return j;
}

inline ActionObjectPair pair_from_json(const nlohmann::json& j) {
  ActionObjectPair p;
  const auto rule = parse_rule(j.at("rule").get<std::string>());
  if (!rule) throw Error("unknown pair rule '" + j.at("rule").get<std::string>() + "'");
  p.rule = *rule;
  p.comment_id = j.at("comment_id").get<std::string>();
  p.sentence_ordinal = j.at("sentence_ordinal").get<int>();
  p.action_lemma = j.at("action_lemma").get<std::string>();
  p.object_lemmas = j.at("object_lemmas").get<std::vector<std::string>>();
  p.action_upos = j.at("action_upos").get<std::string>();
  p.object_upos = j.at("object_upos").get<std::vector<std::string>>();
  p.action_index = j.at("action_index").get<int>();
  p.object_indices = j.at("object_indices").get<std::vector<int>>();
  p.token_distance = j.at("token_distance").get<int>();
  if (p.object_lemmas.empty()) throw Error("pair with empty object");
  return p;
}

}  // namespace intent_miner

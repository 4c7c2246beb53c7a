#pragma once

// English stopword list for the keyword baseline (mirrors data/stopwords_en.txt).

#include <istream>
#include <string>
#include <string_view>
#include <unordered_set>

#include "intent_miner/text.hpp"

namespace intent_miner {

using StopwordSet = std::unordered_set<std::string>;

namespace detail {

inline constexpr std::string_view kEnglishStopwords[] = {
    "a", "about", "above", "across", "after", "again", "against", "all", "almost", "also", "although",
    "always", "am", "among", "an", "and", "another", "any", "anyone", "anything", "are", "around", "as", "at",
    "back", "be", "became", "because", "become", "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "cannot", "could", "did", "do", "does", "doing", "done", "down", "during", "each", "either",
    "else", "enough", "even", "ever", "every", "few", "for", "from", "further", "get", "gets", "got", "had",
    "has", "have", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
    "however", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "least", "less", "let", "many",
    "may", "me", "might", "more", "most", "much", "must", "my", "myself", "neither", "never", "no", "nor",
    "not", "now", "of", "off", "often", "on", "once", "one", "only", "or", "other", "others", "our", "ours",
    "ourselves", "out", "over", "own", "per", "perhaps", "please", "quite", "rather", "really", "same", "she",
    "should", "since", "so", "some", "something", "still", "such", "than", "that", "the", "their", "theirs",
    "them", "themselves", "then", "there", "these", "they", "this", "those", "though", "through", "thus",
    "to", "too", "under", "until", "up", "upon", "us", "very", "via", "was", "we", "well", "were", "what",
    "whatever", "when", "where", "whether", "which", "while", "who", "whom", "whose", "why", "will", "with",
    "within", "without", "would", "yet", "you", "your", "yours", "yourself", "yourselves",
};

}  // namespace detail

inline StopwordSet bundled_stopwords() {
  StopwordSet s;
  for (auto w : detail::kEnglishStopwords) s.emplace(w);
  return s;
}

/// One word per line; blank lines and '#' lines are ignored.
inline StopwordSet load_stopwords(std::istream& in) {
  StopwordSet s;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    s.insert(text::to_lower(line));
  }
  return s;
}

}  // namespace intent_miner

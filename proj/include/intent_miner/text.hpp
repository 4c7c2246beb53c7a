#pragma once

// Plain-text segmentation shared by the corpus statistics and the keyword
// baseline. Sentences end at '.', '!', '?' or a line break; other punctuation
// splits a sentence into blocks; whitespace separates words.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace intent_miner::text {

inline bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '\'' || c == '-' || c == '_' || u >= 0x80;
}

inline bool is_sentence_end(char c) {
  return c == '.' || c == '!' || c == '?' || c == '\n' || c == '\r';
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v'; }

using Block = std::vector<std::string>;
using Sentence = std::vector<Block>;

/// Splits `text` into sentences of punctuation-free word blocks. Empty blocks
/// and empty sentences are never produced.
inline std::vector<Sentence> segment(std::string_view text) {
  std::vector<Sentence> sentences;
  Sentence sentence;
  Block block;
  std::string word;

  auto flush_word = [&] {
    if (!word.empty()) block.push_back(std::move(word));
    word.clear();
  };
  auto flush_block = [&] {
    flush_word();
    if (!block.empty()) sentence.push_back(std::move(block));
    block.clear();
  };
  auto flush_sentence = [&] {
    flush_block();
    if (!sentence.empty()) sentences.push_back(std::move(sentence));
    sentence.clear();
  };

  for (char c : text) {
    if (is_word_byte(c)) {
      word.push_back(c);
    } else if (is_space(c)) {
      flush_word();
    } else if (is_sentence_end(c)) {
      flush_sentence();
    } else {
      flush_block();
    }
  }
  flush_sentence();
  return sentences;
}

inline std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  for (auto& sentence : segment(text))
    for (auto& block : sentence)
      for (auto& w : block) out.push_back(std::move(w));
  return out;
}

inline bool has_content(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u >= 0x80;
  });
}

/// Number of words in `text`; tokens made only of apostrophes, hyphens or
/// underscores are punctuation and do not count.
inline std::size_t word_count(std::string_view text) {
  std::size_t n = 0;
  for (const auto& w : words(text))
    if (has_content(w)) ++n;
  return n;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// 1 - edit distance / length of the longer string; 1.0 for two empty strings.
inline double edit_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

}  // namespace intent_miner::text

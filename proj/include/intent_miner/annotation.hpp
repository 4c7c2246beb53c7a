#pragma once

// CoNLL-U reader/writer and comment alignment. Each sentence block must carry
// a "# comment_id = <id>" line; sentences sharing an id form one comment.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "intent_miner/corpus.hpp"
#include "intent_miner/error.hpp"
#include "intent_miner/text.hpp"

namespace intent_miner {

struct TokenAnn {
  int index = 0;  // 1-based
  std::string surface;
  std::string lemma;  // lowercased
  std::string upos;
  int head = 0;  // 0 = root
  std::string deprel;

  bool operator==(const TokenAnn&) const = default;
};

using AnnSentence = std::vector<TokenAnn>;

struct AnnotatedComment {
  std::string comment_id;
  std::vector<AnnSentence> sentences;

  bool operator==(const AnnotatedComment&) const = default;
};

inline bool is_noun_tag(std::string_view upos) { return upos == "NOUN" || upos == "PROPN"; }
inline bool is_verb_tag(std::string_view upos) { return upos == "VERB"; }
inline bool is_adj_tag(std::string_view upos) { return upos == "ADJ"; }

struct SentenceRejection {
  std::size_t sentence_ordinal = 0;  // 1-based over the whole stream
  std::size_t line = 0;              // first line of the block
  std::string reason;
};

struct ConlluResult {
  std::vector<AnnotatedComment> comments;
  std::vector<SentenceRejection> rejected;
  std::size_t sentences_read = 0;
};

namespace detail {

inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

/// Empty string when the sentence is a well-formed tree, else the reason.
inline std::string validate_tree(const AnnSentence& s) {
  const int n = static_cast<int>(s.size());
  if (n == 0) return "empty sentence";
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const auto& t = s[i];
    if (t.index != i + 1) return "token indices not contiguous at position " + std::to_string(i + 1);
    if (t.head < 0 || t.head > n)
      return "head " + std::to_string(t.head) + " out of range for token " + std::to_string(t.index);
    if (t.head == t.index) return "token " + std::to_string(t.index) + " is its own head";
    if (t.head == 0) ++roots;
  }
  if (roots != 1) return std::to_string(roots) + " roots (expected exactly one)";
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    int steps = 0;
    while (cur != 0) {
      cur = s[cur - 1].head;
      if (++steps > n) return "cycle through token " + std::to_string(i);
    }
  }
  return {};
}

}  // namespace detail

/// Streaming CoNLL-U parser. Multiword ranges and empty nodes are skipped;
/// malformed sentences are rejected with a diagnostic and parsing continues.
inline ConlluResult parse_conllu(std::istream& in) {
  ConlluResult result;
  std::unordered_map<std::string, std::size_t> slot;

  std::string comment_id;
  AnnSentence sentence;
  std::string error;
  bool in_block = false;
  std::size_t block_line = 0;

  auto finish = [&] {
    if (!in_block) return;
    ++result.sentences_read;
    if (error.empty() && comment_id.empty()) error = "missing '# comment_id' metadata";
    if (error.empty()) error = detail::validate_tree(sentence);
    if (!error.empty()) {
      result.rejected.push_back({result.sentences_read, block_line, error});
    } else {
      auto [it, inserted] = slot.emplace(comment_id, result.comments.size());
      if (inserted) result.comments.push_back(AnnotatedComment{comment_id, {}});
      result.comments[it->second].sentences.push_back(std::move(sentence));
    }
    comment_id.clear();
    sentence.clear();
    error.clear();
    in_block = false;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish();
      continue;
    }
    if (!in_block) {
      in_block = true;
      block_line = line_no;
    }
    if (line[0] == '#') {
      constexpr std::string_view key = "comment_id";
      std::string_view body = std::string_view(line).substr(1);
      const auto eq = body.find('=');
      if (eq != std::string_view::npos) {
        auto trim = [](std::string_view v) {
          const auto b = v.find_first_not_of(" \t");
          if (b == std::string_view::npos) return std::string_view{};
          const auto e = v.find_last_not_of(" \t");
          return v.substr(b, e - b + 1);
        };
        if (trim(body.substr(0, eq)) == key) comment_id = std::string(trim(body.substr(eq + 1)));
      }
      continue;
    }
    if (!error.empty()) continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() < 8) {
      error = "line " + std::to_string(line_no) + ": expected 10 tab-separated columns";
      continue;
    }
    if (cols[0].find('-') != std::string::npos || cols[0].find('.') != std::string::npos) continue;
    TokenAnn t;
    if (!detail::parse_int(cols[0], t.index)) {
      error = "line " + std::to_string(line_no) + ": bad token id '" + cols[0] + "'";
      continue;
    }
    if (!detail::parse_int(cols[6], t.head)) {
      error = "line " + std::to_string(line_no) + ": bad head '" + cols[6] + "'";
      continue;
    }
    t.surface = cols[1];
    t.lemma = text::to_lower(cols[2] == "_" ? cols[1] : cols[2]);
    t.upos = cols[3];
    t.deprel = cols[7];
    sentence.push_back(std::move(t));
  }
  finish();
  return result;
}

inline void write_conllu(std::ostream& out, const std::vector<AnnotatedComment>& comments) {
  for (const auto& c : comments) {
    for (const auto& s : c.sentences) {
      out << "# comment_id = " << c.comment_id << '\n';
      for (const auto& t : s)
        out << t.index << '\t' << t.surface << '\t' << t.lemma << '\t' << t.upos << "\t_\t_\t" << t.head << '\t'
            << t.deprel << "\t_\t_\n";
      out << '\n';
    }
  }
}

/// Content lemmas of a comment in reading order (punctuation dropped).
inline std::vector<std::string> content_lemmas(const AnnotatedComment& c) {
  std::vector<std::string> out;
  for (const auto& s : c.sentences)
    for (const auto& t : s)
      if (t.upos != "PUNCT" && t.upos != "SYM") out.push_back(t.lemma);
  return out;
}

struct AnnotatedThread {
  std::string thread_id;
  std::vector<AnnotatedComment> comments;  // thread order, annotated comments only
};

struct AnnotatedCorpus {
  std::vector<AnnotatedThread> threads;  // one per corpus thread, same order
  std::vector<std::string> unannotated_comment_ids;
  std::vector<std::string> warnings;
  std::size_t n_comments = 0;
  std::size_t n_annotated = 0;
  double coverage = 0.0;
};

/// Pairs corpus comments with their annotations. Unknown annotation ids are
/// dropped with a warning; comments without annotations are flagged.
inline AnnotatedCorpus align(const Corpus& corpus, const std::vector<AnnotatedComment>& annotations) {
  AnnotatedCorpus out;
  std::unordered_map<std::string_view, const AnnotatedComment*> by_id;
  for (const auto& a : annotations) by_id.emplace(a.comment_id, &a);

  std::unordered_set<std::string_view> known;
  for (const auto& t : corpus) {
    AnnotatedThread at{t.post.id, {}};
    for (const auto& c : t.comments) {
      known.insert(c.id);
      ++out.n_comments;
      if (auto it = by_id.find(c.id); it != by_id.end()) {
        at.comments.push_back(*it->second);
        ++out.n_annotated;
      } else {
        out.unannotated_comment_ids.push_back(c.id);
      }
    }
    out.threads.push_back(std::move(at));
  }
  for (const auto& a : annotations)
    if (!known.contains(a.comment_id))
      out.warnings.push_back("annotation for unknown comment id '" + a.comment_id + "' dropped");
  if (out.n_comments > 0)
    out.coverage = static_cast<double>(out.n_annotated) / static_cast<double>(out.n_comments);
  return out;
}

/// Majority UPOS per lowercased surface form, used to tag words that did not
/// come out of the extraction stage. Unknown words are NOUN.
class UposTable {
 public:
  UposTable() = default;

  explicit UposTable(const std::vector<AnnotatedComment>& annotations) {
    std::unordered_map<std::string, std::map<std::string, std::size_t>> counts;
    for (const auto& c : annotations)
      for (const auto& s : c.sentences)
        for (const auto& t : s) ++counts[text::to_lower(t.surface)][t.upos];
    for (auto& [word, tags] : counts) {
      auto best = tags.begin();
      for (auto it = tags.begin(); it != tags.end(); ++it)
        if (it->second > best->second) best = it;  // map order breaks ties alphabetically
      table_.emplace(word, best->first);
    }
  }

  std::string lookup(std::string_view word) const {
    auto it = table_.find(text::to_lower(word));
    return it == table_.end() ? std::string("NOUN") : it->second;
  }

  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::string, std::string> table_;
};

}  // namespace intent_miner

#pragma once

// Shared helpers for the unit and acceptance tests: paths, scratch
// directories, token builders and seeded random fixtures.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "intent_miner/intent_miner.hpp"

namespace im_test {

namespace fs = std::filesystem;
using namespace intent_miner;

inline std::string source_path(const std::string& rel) { return (fs::path(IM_SOURCE_DIR) / rel).string(); }

inline std::string cli_path() { return IM_CLI_PATH; }

/// Fresh, empty directory under the system temp dir.
inline fs::path scratch_dir(const std::string& name) {
  static std::atomic<int> counter{0};
  auto p = fs::temp_directory_path() /
           ("im_test_" + name + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline TokenAnn tok(int index, std::string lemma, std::string upos, int head, std::string deprel) {
  TokenAnn t;
  t.index = index;
  t.surface = lemma;
  t.lemma = std::move(lemma);
  t.upos = std::move(upos);
  t.head = head;
  t.deprel = std::move(deprel);
  return t;
}

inline SummaryPhrase phrase(std::string text, std::vector<std::string> upos, double score = 1.0) {
  return SummaryPhrase{std::move(text), score, std::move(upos)};
}

inline const std::vector<std::string>& random_upos_pool() {
  static const std::vector<std::string> pool{"NOUN", "NOUN", "PROPN", "VERB", "VERB", "ADJ", "DET",
                                             "ADP",  "ADV",  "PART",  "AUX",  "PRON", "PUNCT"};
  return pool;
}

/// A random sentence with a well-formed tree (single root, heads in range).
/// Tags, relations and lemmas are drawn to exercise every extraction rule.
inline AnnSentence random_sentence(std::mt19937_64& rng) {
  static const std::vector<std::string> deprels{"obj",  "dobj", "compound", "acomp", "pobj",  "prep",
                                                "neg",  "nsubj", "amod",    "det",   "advmod", "conj"};
  static const std::vector<std::string> lemmas{"card", "bank", "point", "use",   "get",  "open", "good",
                                               "fee",  "not",  "never", "no",    "bonus", "hysa", "zelle"};
  const auto& upos = random_upos_pool();
  const int n = std::uniform_int_distribution<int>(1, 14)(rng);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);

  AnnSentence s(static_cast<std::size_t>(n));
  for (int pos = 0; pos < n; ++pos) {
    const int idx = order[static_cast<std::size_t>(pos)];
    const int head =
        pos == 0 ? 0 : order[std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(pos - 1))(rng)];
    const auto& rel = pos == 0 ? std::string("ROOT") : deprels[std::uniform_int_distribution<std::size_t>(0, deprels.size() - 1)(rng)];
    s[static_cast<std::size_t>(idx - 1)] =
        tok(idx, lemmas[std::uniform_int_distribution<std::size_t>(0, lemmas.size() - 1)(rng)],
            upos[std::uniform_int_distribution<std::size_t>(0, upos.size() - 1)(rng)], head, rel);
  }
  return s;
}

/// A random summary phrase of 1..5 words over a small vocabulary.
inline SummaryPhrase random_phrase(std::mt19937_64& rng) {
  static const std::vector<std::string> words{"get", "point", "card", "bank", "open", "fee", "good", "bonus", "zelle"};
  static const std::vector<std::string> tags{"NOUN", "PROPN", "VERB", "ADJ", "ADP", "DET", "ADV"};
  const int n = std::uniform_int_distribution<int>(1, 5)(rng);
  SummaryPhrase p;
  for (int i = 0; i < n; ++i) {
    if (i > 0) p.text += ' ';
    p.text += words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
    p.upos.push_back(tags[std::uniform_int_distribution<std::size_t>(0, tags.size() - 1)(rng)]);
  }
  return p;
}

inline PhraseVector dense_point(std::string id, const std::vector<double>& xs) {
  std::map<std::uint32_t, double> m;
  for (std::size_t i = 0; i < xs.size(); ++i) m[static_cast<std::uint32_t>(i)] = xs[i];
  PhraseVector v;
  v.thread_id = std::move(id);
  v.weights = SparseVector::from_map(m);
  v.norm = v.weights.norm();
  v.zero = v.weights.empty();
  return v;
}

inline ClusterAssignment labelled(std::vector<std::size_t> labels, std::size_t k) {
  ClusterAssignment a;
  a.k = k;
  for (std::size_t i = 0; i < labels.size(); ++i) a.thread_ids.push_back("t" + std::to_string(i));
  a.labels = std::move(labels);
  return a;
}

}  // namespace im_test

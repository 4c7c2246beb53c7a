#pragma once

// Thread corpus: JSONL ingestion, preprocessing filters and dataset statistics.
//
// One JSON object per line:
//   {"kind":"post"|"comment","id":str,"post_id":str (comments),"title":str (posts),
//    "body":str,"created_utc":int,"flair":str|null,"author_status":"active"|"deleted"|"bot",
//    "depth":int (comments)}

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "intent_miner/binary_io.hpp"
#include "intent_miner/error.hpp"
#include "intent_miner/text.hpp"

namespace intent_miner {

enum class AuthorStatus : std::uint8_t { active = 0, deleted = 1, bot = 2 };

inline std::string_view to_string(AuthorStatus s) {
  switch (s) {
    case AuthorStatus::active: return "active";
    case AuthorStatus::deleted: return "deleted";
    case AuthorStatus::bot: return "bot";
  }
  return "active";
}

inline std::optional<AuthorStatus> parse_author_status(std::string_view s) {
  if (s == "active") return AuthorStatus::active;
  if (s == "deleted") return AuthorStatus::deleted;
  if (s == "bot") return AuthorStatus::bot;
  return std::nullopt;
}

inline constexpr std::string_view kLowQualityFlair = "Low-Quality Post";

struct Post {
  std::string id;
  std::string title;
  std::string body;
  std::int64_t created_utc = 0;
  std::optional<std::string> flair;
  AuthorStatus author_status = AuthorStatus::active;

  bool operator==(const Post&) const = default;
};

struct Comment {
  std::string id;
  std::string post_id;
  std::string body;
  std::int64_t created_utc = 0;
  int depth = 0;  // 0 = top-level
  AuthorStatus author_status = AuthorStatus::active;

  bool operator==(const Comment&) const = default;
};

struct Thread {
  Post post;
  std::vector<Comment> comments;

  bool operator==(const Thread&) const = default;
};

using Corpus = std::vector<Thread>;

struct CorpusStats {
  std::size_t n_posts = 0;
  std::size_t n_comments = 0;
  double avg_comments_per_post = 0.0;
  double avg_post_len_words = 0.0;
  double avg_comment_len_words = 0.0;
  double avg_thread_span_days = 0.0;

  bool operator==(const CorpusStats&) const = default;
};

struct IngestResult {
  Corpus corpus;
  std::vector<Diagnostic> errors;    // skipped lines and orphan comments
  std::vector<Diagnostic> warnings;  // duplicate comment ids
};

/// Checks one JSONL record against the thread schema. Returns the first
/// violation, or nullopt when the record is valid.
inline std::optional<std::string> validate_record(const nlohmann::json& j) {
  if (!j.is_object()) return "record is not a JSON object";
  auto require_string = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key) || !j[key].is_string()) return std::string("missing or non-string field '") + key + "'";
    return std::nullopt;
  };
  if (auto e = require_string("kind")) return e;
  const auto kind = j["kind"].get<std::string>();
  if (kind != "post" && kind != "comment") return "unknown kind '" + kind + "'";
  if (auto e = require_string("id")) return e;
  if (j["id"].get<std::string>().empty()) return "empty id";
  if (auto e = require_string("body")) return e;
  if (!j.contains("created_utc") || !j["created_utc"].is_number_integer()) return "missing or non-integer 'created_utc'";
  if (j["created_utc"].get<std::int64_t>() < 0) return "negative created_utc";
  if (auto e = require_string("author_status")) return e;
  if (!parse_author_status(j["author_status"].get<std::string>())) return "invalid author_status";
  if (j.contains("flair") && !j["flair"].is_null() && !j["flair"].is_string()) return "flair must be string or null";
  if (kind == "post") {
    if (auto e = require_string("title")) return e;
  } else {
    if (auto e = require_string("post_id")) return e;
    if (!j.contains("depth") || !j["depth"].is_number_integer()) return "missing or non-integer 'depth'";
    if (j["depth"].get<std::int64_t>() < 0) return "negative depth";
  }
  return std::nullopt;
}

/// Reads a JSONL thread stream. Malformed lines and orphan comments are
/// reported and skipped; a duplicate post id throws.
inline IngestResult ingest_threads(std::istream& in) {
  IngestResult result;
  std::unordered_map<std::string, std::size_t> post_index;
  struct PendingComment {
    Comment comment;
    std::size_t line;
    std::size_t seq;
  };
  std::vector<PendingComment> pending;
  std::unordered_map<std::string, std::size_t> comment_slot;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      result.errors.push_back({line_no, std::string("malformed JSON: ") + e.what()});
      continue;
    }
    if (auto err = validate_record(j)) {
      result.errors.push_back({line_no, *err});
      continue;
    }

    const auto status = *parse_author_status(j["author_status"].get<std::string>());
    if (j["kind"] == "post") {
      Post p;
      p.id = j["id"].get<std::string>();
      p.title = j["title"].get<std::string>();
      p.body = j["body"].get<std::string>();
      p.created_utc = j["created_utc"].get<std::int64_t>();
      if (j.contains("flair") && j["flair"].is_string()) p.flair = j["flair"].get<std::string>();
      p.author_status = status;
      if (post_index.contains(p.id))
        throw Error("line " + std::to_string(line_no) + ": duplicate post id '" + p.id + "'");
      post_index.emplace(p.id, result.corpus.size());
      result.corpus.push_back(Thread{std::move(p), {}});
    } else {
      Comment c;
      c.id = j["id"].get<std::string>();
      c.post_id = j["post_id"].get<std::string>();
      c.body = j["body"].get<std::string>();
      c.created_utc = j["created_utc"].get<std::int64_t>();
      c.depth = static_cast<int>(j["depth"].get<std::int64_t>());
      c.author_status = status;
      if (auto it = comment_slot.find(c.id); it != comment_slot.end()) {
        result.warnings.push_back({line_no, "duplicate comment id '" + c.id + "', keeping the last occurrence"});
        pending[it->second] = PendingComment{std::move(c), line_no, pending[it->second].seq};
      } else {
        comment_slot.emplace(c.id, pending.size());
        pending.push_back(PendingComment{std::move(c), line_no, pending.size()});
      }
    }
  }

  for (auto& pc : pending) {
    auto it = post_index.find(pc.comment.post_id);
    if (it == post_index.end()) {
      result.errors.push_back({pc.line, "orphan comment '" + pc.comment.id + "' references unknown post '" +
                                            pc.comment.post_id + "'"});
      continue;
    }
    result.corpus[it->second].comments.push_back(std::move(pc.comment));
  }
  for (auto& t : result.corpus)
    std::stable_sort(t.comments.begin(), t.comments.end(),
                     [](const Comment& a, const Comment& b) { return a.created_utc < b.created_utc; });
  return result;
}

inline nlohmann::ordered_json to_json(const Post& p) {
  nlohmann::ordered_json j;
  j["kind"] = "post";
  j["id"] = p.id;
  j["title"] = p.title;
  j["body"] = p.body;
  j["created_utc"] = p.created_utc;
  j["flair"] = p.flair ? nlohmann::ordered_json(*p.flair) : nlohmann::ordered_json(nullptr);
  j["author_status"] = to_string(p.author_status);
  return j;
}

inline nlohmann::ordered_json to_json(const Comment& c) {
  nlohmann::ordered_json j;
  j["kind"] = "comment";
  j["id"] = c.id;
  j["post_id"] = c.post_id;
  j["body"] = c.body;
  j["created_utc"] = c.created_utc;
  j["flair"] = nullptr;
  j["author_status"] = to_string(c.author_status);
  j["depth"] = c.depth;
  return j;
}

inline void write_threads_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& t : corpus) {
    out << to_json(t.post).dump() << '\n';
    for (const auto& c : t.comments) out << to_json(c).dump() << '\n';
  }
}

/// Drops low-quality threads, comments by deleted or bot accounts, and
/// replies below the top level. Threads left without comments are kept.
inline Corpus preprocess(const Corpus& corpus) {
  Corpus out;
  out.reserve(corpus.size());
  for (const auto& t : corpus) {
    if (t.post.flair && *t.post.flair == kLowQualityFlair) continue;
    Thread kept{t.post, {}};
    for (const auto& c : t.comments)
      if (c.depth == 0 && c.author_status == AuthorStatus::active) kept.comments.push_back(c);
    out.push_back(std::move(kept));
  }
  return out;
}

/// Post length counts title and body words. Thread span is the gap between
/// the first and last comment in days, averaged over threads with comments.
inline CorpusStats compute_stats(const Corpus& corpus) {
  CorpusStats s;
  s.n_posts = corpus.size();
  if (corpus.empty()) return s;

  double post_words = 0.0, comment_words = 0.0, span_sum = 0.0;
  std::size_t span_threads = 0;
  for (const auto& t : corpus) {
    post_words += static_cast<double>(text::word_count(t.post.title) + text::word_count(t.post.body));
    s.n_comments += t.comments.size();
    for (const auto& c : t.comments) comment_words += static_cast<double>(text::word_count(c.body));
    if (t.comments.empty()) continue;
    ++span_threads;
    if (t.comments.size() >= 2) {
      const auto [lo, hi] = std::minmax_element(t.comments.begin(), t.comments.end(),
                                                [](const Comment& a, const Comment& b) {
                                                  return a.created_utc < b.created_utc;
                                                });
      span_sum += static_cast<double>(hi->created_utc - lo->created_utc) / 86400.0;
    }
  }
  s.avg_comments_per_post = static_cast<double>(s.n_comments) / static_cast<double>(s.n_posts);
  s.avg_post_len_words = post_words / static_cast<double>(s.n_posts);
  if (s.n_comments > 0) s.avg_comment_len_words = comment_words / static_cast<double>(s.n_comments);
  if (span_threads > 0) s.avg_thread_span_days = span_sum / static_cast<double>(span_threads);
  return s;
}

// corpus.bin: "IMCORPUS", u32 version, u64 thread count, then threads.
inline constexpr std::string_view kCorpusMagic = "IMCORPUS";
inline constexpr std::uint32_t kCorpusVersion = 1;

inline void save_corpus(std::ostream& out, const Corpus& corpus) {
  binary::Writer w(out);
  w.magic(kCorpusMagic);
  w.u32(kCorpusVersion);
  w.u64(corpus.size());
  for (const auto& t : corpus) {
    const auto& p = t.post;
    w.str(p.id);
    w.str(p.title);
    w.str(p.body);
    w.i64(p.created_utc);
    w.u8(p.flair ? 1 : 0);
    if (p.flair) w.str(*p.flair);
    w.u8(static_cast<std::uint8_t>(p.author_status));
    w.u64(t.comments.size());
    for (const auto& c : t.comments) {
      w.str(c.id);
      w.str(c.post_id);
      w.str(c.body);
      w.i64(c.created_utc);
      w.i64(c.depth);
      w.u8(static_cast<std::uint8_t>(c.author_status));
    }
  }
}

inline AuthorStatus checked_status(std::uint8_t v) {
  if (v > 2) throw Error("corpus.bin: invalid author status byte");
  return static_cast<AuthorStatus>(v);
}

inline Corpus load_corpus(std::istream& in) {
  binary::Reader r(in, "corpus.bin");
  r.expect_magic(kCorpusMagic);
  if (const auto v = r.u32(); v != kCorpusVersion)
    throw Error("corpus.bin: unsupported version " + std::to_string(v));
  Corpus corpus(r.u64());
  for (auto& t : corpus) {
    auto& p = t.post;
    p.id = r.str();
    p.title = r.str();
    p.body = r.str();
    p.created_utc = r.i64();
    if (r.u8()) p.flair = r.str();
    p.author_status = checked_status(r.u8());
    t.comments.resize(r.u64());
    for (auto& c : t.comments) {
      c.id = r.str();
      c.post_id = r.str();
      c.body = r.str();
      c.created_utc = r.i64();
      c.depth = static_cast<int>(r.i64());
      c.author_status = checked_status(r.u8());
    }
  }
  return corpus;
}

inline void save_corpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_corpus(out, corpus);
}

inline Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_corpus(in);
}

}  // namespace intent_miner

#pragma once

// Corpus-level stages shared by the command-line subcommands and the
// end-to-end run. Every stage is deterministic; `jobs` only changes speed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "intent_miner/annotation.hpp"
#include "intent_miner/clustering.hpp"
#include "intent_miner/config.hpp"
#include "intent_miner/corpus.hpp"
#include "intent_miner/error.hpp"
#include "intent_miner/extraction.hpp"
#include "intent_miner/metrics.hpp"
#include "intent_miner/parallel.hpp"
#include "intent_miner/scoring.hpp"
#include "intent_miner/sentiment.hpp"
#include "intent_miner/stopwords.hpp"
#include "intent_miner/text.hpp"
#include "intent_miner/yake.hpp"

namespace intent_miner {

/// A failure inside a named pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error("[" + stage + "] " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

template <class Fn>
auto run_stage(std::string_view stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(std::string(stage), e.what());
  }
}

// ---------------------------------------------------------------- files

std::ifstream open_input(const std::string& path, bool binary = false);

std::ofstream open_output(const std::string& path, bool binary = false);

ConlluResult read_conllu_file(const std::string& path);

std::vector<SummaryRecord> read_summaries_file(const std::string& path);

void write_summaries_file(const std::string& path, std::span<const SummaryRecord> records);

void write_json_file(const std::string& path, const nlohmann::ordered_json& j);

// ------------------------------------------------------------- extraction

struct ThreadPairs {
  std::string thread_id;
  std::vector<ActionObjectPair> pairs;  // comment order, then sentence order
};

std::vector<ThreadPairs> extract_corpus(const AnnotatedCorpus& ac, std::size_t jobs = 1);

void write_pairs(std::ostream& out, std::span<const ThreadPairs> threads);

/// Groups pair lines by thread id, in order of first appearance.
std::vector<ThreadPairs> read_pairs(std::istream& in);

/// One entry per corpus thread, in corpus order, filled from `pairs`.
std::vector<ThreadPairs> pairs_for_corpus(const Corpus& corpus, std::vector<ThreadPairs> pairs);

// -------------------------------------------------------------- documents

/// Lowercased word tokens of raw text, punctuation excluded.
std::vector<std::string> raw_tokens(std::string_view body);

struct ThreadDocs {
  std::string thread_id;
  std::vector<ScoredComment> comments;  // lemmas filled, scores 0 until scored
};

/// Comment documents: annotation lemmas where available, otherwise the
/// lowercased raw tokens of the body.
std::vector<ThreadDocs> comment_documents(const Corpus& corpus,
                                          const std::vector<AnnotatedComment>* annotations = nullptr);

TfIdfModel fit_corpus_model(std::span<const ThreadDocs> docs);

// -------------------------------------------------------------- summaries

std::vector<SummaryRecord> summarize_corpus(std::span<const ThreadPairs> threads, const TfIdfModel& model);

/// Scores every comment, then ranks each thread's aspects. Threads are
/// matched by id; a thread without documents gets no aspects.
std::vector<ThreadAspects> sentiment_corpus(std::span<const ThreadPairs> threads, std::vector<ThreadDocs> docs,
                                            const SentimentScorer& scorer, std::size_t window = 0,
                                            std::size_t jobs = 1);

/// Text handed to YAKE for a thread: its comment bodies, one per line.
std::string thread_text(const Thread& t);

std::vector<SummaryRecord> yake_corpus(const Corpus& corpus, const YakeConfig& config,
                                       const StopwordSet& stopwords, const UposTable& tags,
                                       std::size_t jobs = 1);

// ------------------------------------------------------------- clustering

/// Records carrying the given rule label, in file order, one per thread.
std::vector<SummaryRecord> select_method(std::span<const SummaryRecord> records, std::string_view method);

std::map<std::string, std::vector<SummaryPhrase>> phrases_by_thread(std::span<const SummaryRecord> records,
                                                                     std::string_view method);

struct ClusterOptions {
  std::size_t k = 50;
  Linkage linkage = Linkage::upgma;
  VectorScheme scheme = VectorScheme::ti_weighted;
};

ClusterFile cluster_method(std::span<const SummaryRecord> records, std::string_view method,
                           const TfIdfModel& model, const ClusterOptions& options);

ClusterFile read_cluster_file(const std::string& path);

// -------------------------------------------------------------- reporting

std::string format_number(double x, int precision = 2);

std::string format_stats(const CorpusStats& s);

std::string stats_csv(const CorpusStats& s);

/// Plain-text comparison table: context metrics as mean ± sd, then the
/// three cluster scores.
std::string format_report_table(std::span<const MetricsReport> reports);

/// Align warnings with the per-id "unknown comment" lines folded into a count.
std::vector<std::string> condensed_align_warnings(const std::vector<std::string>& warnings);

// -------------------------------------------------------------------- run

struct RunConfig {
  std::string threads;    // corpus JSONL
  std::string conllu;     // annotations
  std::string lexicon;    // optional TSV; bundled lexicon when empty
  std::string model;      // optional pre-fitted model.tfidf; fitted when empty
  std::string stopwords;  // optional list; bundled list when empty
  std::string out_dir = "intent-miner-out";
  std::vector<std::size_t> k{50, 100};
  std::vector<std::string> methods{"VN", "VR", "YAKE"};
  Linkage linkage = Linkage::upgma;
  VectorScheme scheme = VectorScheme::ti_weighted;
  YakeConfig yake;
  std::size_t match_window = 0;
  Distance silhouette_distance = Distance::cosine;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;  // reserved; nothing is random

  void validate() const {
    auto exists = [](const std::string& what, const std::string& p, bool required) {
      if (p.empty()) {
        if (required) throw Error("config: " + what + " path is required");
        return;
      }
      if (!std::filesystem::exists(p)) throw Error("config: " + what + " '" + p + "' does not exist");
    };
    exists("threads", threads, true);
    exists("conllu", conllu, true);
    exists("lexicon", lexicon, false);
    exists("model", model, false);
    exists("stopwords", stopwords, false);
    if (k.empty()) throw Error("config: no k values");
    for (auto x : k)
      if (x < 1) throw Error("config: k must be >= 1");
    if (methods.empty()) throw Error("config: no methods");
    for (const auto& m : methods)
      if (m != "YAKE" && m != "VR" && !parse_rule(m)) throw Error("config: unknown method '" + m + "'");
    if (jobs < 1) throw Error("config: jobs must be >= 1");
    yake.validate();
  }
};

/// Builds a configuration from parsed TOML. Relative paths are resolved
/// against `base_dir` (normally the config file's directory).
RunConfig run_config_from_toml(const TomlTable& t, const std::filesystem::path& base_dir = {});

RunConfig load_run_config(const std::string& path);

struct RunResult {
  std::vector<MetricsReport> reports;
  std::string table;
};

/// The whole pipeline. Artifacts land in config.out_dir; on failure the
/// artifacts of completed stages stay and a StageError names the stage.
RunResult run_pipeline(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace intent_miner

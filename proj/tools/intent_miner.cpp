// intent-miner: command-line front end. Each subcommand runs one stage over
// files; `run` chains them all.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "intent_miner/intent_miner.hpp"

namespace im = intent_miner;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto& part : im::text::split(s, ','))
    if (!part.empty()) out.push_back(part);
  return out;
}

im::Corpus load_corpus_arg(const std::string& path) { return im::load_corpus(path); }

int cmd_ingest(const std::string& in_path, const std::string& out_path, bool raw) {
  auto in = im::open_input(in_path);
  auto r = im::ingest_threads(in);
  for (const auto& d : r.errors) std::cerr << "skipped: " << im::to_string(d) << '\n';
  for (const auto& d : r.warnings) std::cerr << "warning: " << im::to_string(d) << '\n';
  const auto corpus = raw ? r.corpus : im::preprocess(r.corpus);
  im::save_corpus(out_path, corpus);
  std::cerr << corpus.size() << " threads written to " << out_path << '\n';
  return 0;
}

int cmd_stats(const std::string& corpus_path, const std::string& csv) {
  const auto stats = im::compute_stats(load_corpus_arg(corpus_path));
  std::cout << im::format_stats(stats);
  if (!csv.empty()) im::open_output(csv) << im::stats_csv(stats);
  return 0;
}

int cmd_annotate_check(const std::string& conllu, const std::string& corpus_path) {
  const auto r = im::read_conllu_file(conllu);
  for (const auto& rej : r.rejected)
    std::cout << "rejected sentence " << rej.sentence_ordinal << " (line " << rej.line << "): " << rej.reason << '\n';
  std::cout << "sentences: " << r.sentences_read << ", rejected: " << r.rejected.size()
            << ", comments: " << r.comments.size() << '\n';
  if (!corpus_path.empty()) {
    const auto aligned = im::align(load_corpus_arg(corpus_path), r.comments);
    for (const auto& w : aligned.warnings) std::cout << "warning: " << w << '\n';
    std::cout << "coverage: " << aligned.n_annotated << "/" << aligned.n_comments << " = "
              << im::format_number(aligned.coverage, 4) << '\n';
  }
  return r.rejected.empty() ? 0 : 1;
}

int cmd_extract(const std::string& corpus_path, const std::string& conllu, const std::string& out_path,
                std::size_t jobs) {
  const auto corpus = load_corpus_arg(corpus_path);
  const auto r = im::read_conllu_file(conllu);
  for (const auto& rej : r.rejected) std::cerr << "rejected sentence " << rej.sentence_ordinal << ": " << rej.reason << '\n';
  const auto aligned = im::align(corpus, r.comments);
  for (const auto& w : im::condensed_align_warnings(aligned.warnings)) std::cerr << "warning: " << w << '\n';
  const auto pairs = im::extract_corpus(aligned, jobs);
  auto out = im::open_output(out_path);
  im::write_pairs(out, pairs);
  return 0;
}

int cmd_fit(const std::string& corpus_path, const std::string& conllu, const std::string& out_path) {
  const auto corpus = load_corpus_arg(corpus_path);
  std::optional<im::ConlluResult> anns;
  if (!conllu.empty()) anns = im::read_conllu_file(conllu);
  const auto docs = im::comment_documents(corpus, anns ? &anns->comments : nullptr);
  const auto model = im::fit_corpus_model(docs);
  im::save_model(out_path, model);
  std::cerr << "vocabulary " << model.size() << ", documents " << model.n_docs() << '\n';
  return 0;
}

int cmd_summarize(const std::string& pairs_path, const std::string& model_path, const std::string& corpus_path,
                  const std::string& out_path) {
  auto in = im::open_input(pairs_path);
  auto pairs = im::read_pairs(in);
  if (!corpus_path.empty()) pairs = im::pairs_for_corpus(load_corpus_arg(corpus_path), std::move(pairs));
  im::write_summaries_file(out_path, im::summarize_corpus(pairs, im::load_model(model_path)));
  return 0;
}

int cmd_sentiment(const std::string& pairs_path, const std::string& corpus_path, const std::string& conllu,
                  const std::string& lexicon, std::size_t window, const std::string& out_path,
                  const std::string& vr_out, std::size_t jobs) {
  const auto corpus = load_corpus_arg(corpus_path);
  auto in = im::open_input(pairs_path);
  const auto pairs = im::pairs_for_corpus(corpus, im::read_pairs(in));
  std::optional<im::ConlluResult> anns;
  if (!conllu.empty()) anns = im::read_conllu_file(conllu);
  im::SentimentLexicon lex = im::SentimentLexicon::bundled();
  if (!lexicon.empty()) {
    auto lin = im::open_input(lexicon);
    lex = im::SentimentLexicon::load_tsv(lin);
  }
  const im::LexiconScorer scorer(std::move(lex));
  const auto aspects = im::sentiment_corpus(pairs, im::comment_documents(corpus, anns ? &anns->comments : nullptr),
                                            scorer, window, jobs);
  auto out = im::open_output(out_path);
  std::vector<im::SummaryRecord> vr;
  for (const auto& ta : aspects) {
    out << im::to_json(ta).dump() << '\n';
    vr.push_back(im::variant_record(ta));
  }
  if (!vr_out.empty()) im::write_summaries_file(vr_out, vr);
  return 0;
}

int cmd_yake(const std::string& corpus_path, const std::string& conllu, const std::string& ngrams, std::size_t topk,
             double dedup, const std::string& stopwords, const std::string& out_path, std::size_t jobs) {
  im::YakeConfig config;
  config.ngram_sizes.clear();
  for (const auto& n : split_list(ngrams)) config.ngram_sizes.insert(std::stoi(n));
  config.top_k = topk;
  config.dedup_threshold = dedup;
  im::StopwordSet stop = im::bundled_stopwords();
  if (!stopwords.empty()) {
    auto in = im::open_input(stopwords);
    stop = im::load_stopwords(in);
  }
  im::UposTable tags;
  if (!conllu.empty()) tags = im::UposTable(im::read_conllu_file(conllu).comments);
  im::write_summaries_file(out_path, im::yake_corpus(load_corpus_arg(corpus_path), config, stop, tags, jobs));
  return 0;
}

int cmd_cluster(const std::string& summaries, const std::string& model_path, const std::string& method,
                const im::ClusterOptions& options, const std::string& out_path) {
  const auto records = im::read_summaries_file(summaries);
  const auto f = im::cluster_method(records, method, im::load_model(model_path), options);
  im::write_json_file(out_path, im::to_json(f));
  return 0;
}

int cmd_metrics(const std::vector<std::string>& clusters, const std::vector<std::string>& summaries,
                const im::MetricsOptions& options, const std::string& out_path, const std::string& hist) {
  std::vector<im::SummaryRecord> records;
  for (const auto& s : summaries) {
    auto r = im::read_summaries_file(s);
    records.insert(records.end(), r.begin(), r.end());
  }
  std::vector<im::MetricsReport> reports;
  for (const auto& c : clusters) {
    const auto f = im::read_cluster_file(c);
    reports.push_back(im::evaluate(f, im::phrases_by_thread(records, f.assignment.method_tag), options));
  }
  im::write_json_file(out_path, im::reports_to_json(reports));
  if (!hist.empty()) {
    auto h = im::open_output(hist);
    im::write_hist_csv(h, reports);
  }
  std::cout << im::format_report_table(reports);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Action-object intent phrase mining and thread clustering"};
  app.require_subcommand(1);
  std::size_t jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string in, out, corpus, conllu, pairs, model, lexicon, summaries, csv, hist, vr_out, stopwords;
  int rc = 0;

  auto* ingest = app.add_subcommand("ingest", "Validate thread JSONL and write corpus.bin");
  bool raw = false;
  ingest->add_option("--in", in, "Thread JSONL")->required();
  ingest->add_option("--out", out, "corpus.bin")->required();
  ingest->add_flag("--no-preprocess", raw, "Keep filtered threads and comments");
  ingest->callback([&] { rc = cmd_ingest(in, out, raw); });

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--corpus", corpus)->required();
  stats->add_option("--csv", csv, "Also write the statistics as CSV");
  stats->callback([&] { rc = cmd_stats(corpus, csv); });

  auto* check = app.add_subcommand("annotate-check", "Validate CoNLL-U and report coverage");
  check->add_option("--conllu", conllu)->required();
  check->add_option("--corpus", corpus);
  check->callback([&] { rc = cmd_annotate_check(conllu, corpus); });

  auto* extract = app.add_subcommand("extract", "Extract action-object pairs");
  extract->add_option("--corpus", corpus)->required();
  extract->add_option("--conllu", conllu)->required();
  extract->add_option("--out", out)->required();
  extract->callback([&] { rc = cmd_extract(corpus, conllu, out, jobs); });

  auto* fit = app.add_subcommand("fit-tfidf", "Fit the composite TF-IDF model");
  fit->add_option("--corpus", corpus)->required();
  fit->add_option("--conllu", conllu, "Use annotation lemmas as documents");
  fit->add_option("--out", out)->required();
  fit->callback([&] { rc = cmd_fit(corpus, conllu, out); });

  auto* summarize = app.add_subcommand("summarize", "Top phrases per rule for each thread");
  summarize->add_option("--pairs", pairs)->required();
  summarize->add_option("--model", model)->required();
  summarize->add_option("--corpus", corpus, "Emit records for threads without pairs too");
  summarize->add_option("--out", out)->required();
  summarize->callback([&] { rc = cmd_summarize(pairs, model, corpus, out); });

  auto* sentiment = app.add_subcommand("sentiment", "Aspect sentiment rankings");
  std::size_t window = 0;
  sentiment->add_option("--pairs", pairs)->required();
  sentiment->add_option("--corpus", corpus)->required();
  sentiment->add_option("--conllu", conllu, "Use annotation lemmas for comments");
  sentiment->add_option("--lexicon", lexicon, "TSV lemma<TAB>valence");
  sentiment->add_option("--match-window", window, "Aspect must fit in N consecutive tokens (0: anywhere)");
  sentiment->add_option("--out", out)->required();
  sentiment->add_option("--vr-out", vr_out, "Write the variant-sentiment summaries");
  sentiment->callback([&] { rc = cmd_sentiment(pairs, corpus, conllu, lexicon, window, out, vr_out, jobs); });

  auto* yake = app.add_subcommand("yake", "YAKE keyword summaries");
  std::string ngrams = "2,3";
  std::size_t topk = 10;
  double dedup = 0.9;
  yake->add_option("--corpus", corpus)->required();
  yake->add_option("--conllu", conllu, "Tag keyword words with the corpus majority UPOS");
  yake->add_option("--n", ngrams, "N-gram sizes")->capture_default_str();
  yake->add_option("--topk", topk)->capture_default_str();
  yake->add_option("--dedup", dedup)->capture_default_str();
  yake->add_option("--stopwords", stopwords, "One stopword per line");
  yake->add_option("--out", out)->required();
  yake->callback([&] { rc = cmd_yake(corpus, conllu, ngrams, topk, dedup, stopwords, out, jobs); });

  auto* cluster = app.add_subcommand("cluster", "Agglomerative clustering of thread summaries");
  im::ClusterOptions copt;
  std::string method = "VN", linkage = "upgma", scheme = "ti";
  cluster->add_option("--summaries", summaries)->required();
  cluster->add_option("--model", model)->required();
  cluster->add_option("--k", copt.k)->capture_default_str();
  cluster->add_option("--method", method, "Summary rule label to cluster")->capture_default_str();
  cluster->add_option("--linkage", linkage)->check(CLI::IsMember({"upgma", "average", "single", "complete"}))
      ->capture_default_str();
  cluster->add_option("--vectors", scheme)->check(CLI::IsMember({"ti", "binary"}))->capture_default_str();
  cluster->add_option("--out", out)->required();
  cluster->callback([&] {
    copt.linkage = *im::parse_linkage(linkage);
    copt.scheme = *im::parse_vector_scheme(scheme);
    rc = cmd_cluster(summaries, model, method, copt, out);
  });

  auto* metrics = app.add_subcommand("metrics", "Cluster and context metrics");
  std::vector<std::string> cluster_files, summary_files;
  std::string distance = "cosine";
  metrics->add_option("--clusters", cluster_files)->required();
  metrics->add_option("--summaries", summary_files)->required();
  metrics->add_option("--silhouette-distance", distance)->check(CLI::IsMember({"cosine", "euclidean"}))
      ->capture_default_str();
  metrics->add_option("--out", out)->required();
  metrics->add_option("--hist", hist);
  metrics->callback([&] {
    rc = cmd_metrics(cluster_files, summary_files, im::MetricsOptions{*im::parse_distance(distance), jobs}, out, hist);
  });

  auto* run = app.add_subcommand("run", "Full pipeline");
  std::string config_path, out_dir, ks, methods;
  run->add_option("--config", config_path, "run.toml");
  run->add_option("--threads", in);
  run->add_option("--conllu", conllu);
  run->add_option("--lexicon", lexicon);
  run->add_option("--model", model);
  run->add_option("--out-dir", out_dir);
  run->add_option("--k", ks, "Comma-separated cluster counts");
  run->add_option("--methods", methods, "Comma-separated, from VN AN CN VO AP NEG VR YAKE");
  run->add_option("--linkage", linkage)->check(CLI::IsMember({"upgma", "average", "single", "complete"}));
  run->callback([&] {
    im::RunConfig config = config_path.empty() ? im::RunConfig{} : im::run_stage("config", [&] {
      return im::load_run_config(config_path);
    });
    // Flags win over the file.
    if (!in.empty()) config.threads = in;
    if (!conllu.empty()) config.conllu = conllu;
    if (!lexicon.empty()) config.lexicon = lexicon;
    if (!model.empty()) config.model = model;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (!ks.empty()) {
      config.k.clear();
      for (const auto& k : split_list(ks)) config.k.push_back(std::stoul(k));
    }
    if (!methods.empty()) config.methods = split_list(methods);
    if (run->count("--linkage")) config.linkage = *im::parse_linkage(linkage);
    if (app.count("--jobs")) config.jobs = jobs;
    const auto result = im::run_pipeline(config, &std::cerr);
    std::cout << result.table;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "intent-miner: " << e.what() << '\n';
    return 1;
  }
  return rc;
}

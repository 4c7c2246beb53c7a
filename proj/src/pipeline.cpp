#include "intent_miner/pipeline.hpp"

namespace intent_miner {

std::ifstream open_input(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

ConlluResult read_conllu_file(const std::string& path) {
  auto in = open_input(path);
  return parse_conllu(in);
}

std::vector<SummaryRecord> read_summaries_file(const std::string& path) {
  auto in = open_input(path);
  return read_summaries(in);
}

void write_summaries_file(const std::string& path, std::span<const SummaryRecord> records) {
  auto out = open_output(path);
  write_summaries(out, records);
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

std::vector<ThreadPairs> extract_corpus(const AnnotatedCorpus& ac, std::size_t jobs) {
  std::vector<ThreadPairs> out(ac.threads.size());
  parallel_for(ac.threads.size(), jobs, [&](std::size_t i) {
    const auto& t = ac.threads[i];
    out[i].thread_id = t.thread_id;
    for (const auto& c : t.comments) {
      auto p = extract_pairs(c);
      out[i].pairs.insert(out[i].pairs.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
  });
  return out;
}

void write_pairs(std::ostream& out, std::span<const ThreadPairs> threads) {
  for (const auto& t : threads)
    for (const auto& p : t.pairs) out << to_json(p, t.thread_id).dump() << '\n';
}

std::vector<ThreadPairs> read_pairs(std::istream& in) {
  std::vector<ThreadPairs> out;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto tid = j.at("thread_id").get<std::string>();
      auto [it, inserted] = index.emplace(tid, out.size());
      if (inserted) out.push_back(ThreadPairs{tid, {}});
      out[it->second].pairs.push_back(pair_from_json(j));
    } catch (const std::exception& e) {
      throw Error("pairs line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ThreadPairs> pairs_for_corpus(const Corpus& corpus, std::vector<ThreadPairs> pairs) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pairs.size(); ++i) index.emplace(pairs[i].thread_id, i);
  std::vector<ThreadPairs> out;
  for (const auto& t : corpus) {
    ThreadPairs tp{t.post.id, {}};
    if (auto it = index.find(t.post.id); it != index.end()) tp.pairs = std::move(pairs[it->second].pairs);
    out.push_back(std::move(tp));
  }
  return out;
}

std::vector<std::string> raw_tokens(std::string_view body) {
  std::vector<std::string> out;
  for (const auto& s : text::segment(body))
    for (const auto& b : s)
      for (const auto& w : b)
        if (text::has_content(w)) out.push_back(text::to_lower(w));
  return out;
}

std::vector<ThreadDocs> comment_documents(const Corpus& corpus,
                                          const std::vector<AnnotatedComment>* annotations) {
  std::unordered_map<std::string_view, const AnnotatedComment*> by_id;
  if (annotations)
    for (const auto& a : *annotations) by_id.emplace(a.comment_id, &a);
  std::vector<ThreadDocs> out;
  for (const auto& t : corpus) {
    ThreadDocs td{t.post.id, {}};
    for (const auto& c : t.comments) {
      ScoredComment sc{c.id, {}, 0.0};
      if (auto it = by_id.find(c.id); it != by_id.end()) sc.lemmas = content_lemmas(*it->second);
      else sc.lemmas = raw_tokens(c.body);
      td.comments.push_back(std::move(sc));
    }
    out.push_back(std::move(td));
  }
  return out;
}

TfIdfModel fit_corpus_model(std::span<const ThreadDocs> docs) {
  std::vector<std::vector<std::string>> documents;
  for (const auto& t : docs)
    for (const auto& c : t.comments) documents.push_back(c.lemmas);
  return fit_tfidf(documents);
}

std::vector<SummaryRecord> summarize_corpus(std::span<const ThreadPairs> threads, const TfIdfModel& model) {
  std::vector<SummaryRecord> out;
  for (const auto& t : threads) {
    const auto deduped = dedup_pairs(t.pairs);
    auto recs = to_records(summarize_thread(t.thread_id, deduped, model));
    out.insert(out.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
  }
  return out;
}

std::vector<ThreadAspects> sentiment_corpus(std::span<const ThreadPairs> threads, std::vector<ThreadDocs> docs,
                                            const SentimentScorer& scorer, std::size_t window,
                                            std::size_t jobs) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < docs.size(); ++i) index.emplace(docs[i].thread_id, i);
  parallel_for(docs.size(), jobs, [&](std::size_t i) {
    for (auto& c : docs[i].comments) c.score = score_comment(c.comment_id, c.lemmas, scorer).score;
  });
  std::vector<ThreadAspects> out(threads.size());
  parallel_for(threads.size(), jobs, [&](std::size_t i) {
    const auto deduped = dedup_pairs(threads[i].pairs);
    std::span<const ScoredComment> comments;
    if (auto it = index.find(threads[i].thread_id); it != index.end()) comments = docs[it->second].comments;
    out[i] = analyze_thread(threads[i].thread_id, deduped, comments, window);
  });
  return out;
}

std::string thread_text(const Thread& t) {
  std::string s;
  for (const auto& c : t.comments) {
    if (!s.empty()) s += '\n';
    s += c.body;
  }
  return s;
}

std::vector<SummaryRecord> yake_corpus(const Corpus& corpus, const YakeConfig& config,
                                       const StopwordSet& stopwords, const UposTable& tags,
                                       std::size_t jobs) {
  config.validate();
  std::vector<SummaryRecord> out(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    out[i] = SummaryRecord{corpus[i].post.id, "YAKE", {}};
    for (auto& kw : yake_extract(thread_text(corpus[i]), config, stopwords)) {
      SummaryPhrase p{std::move(kw.text), kw.score, {}};
      for (const auto& w : p.words()) p.upos.push_back(tags.lookup(w));
      out[i].phrases.push_back(std::move(p));
    }
  });
  return out;
}

std::vector<SummaryRecord> select_method(std::span<const SummaryRecord> records, std::string_view method) {
  std::vector<SummaryRecord> out;
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (r.rule != method) continue;
    if (!seen.insert(r.thread_id).second) throw Error("thread '" + r.thread_id + "' has two " + r.rule + " records");
    out.push_back(r);
  }
  return out;
}

std::map<std::string, std::vector<SummaryPhrase>> phrases_by_thread(std::span<const SummaryRecord> records,
                                                                     std::string_view method) {
  std::map<std::string, std::vector<SummaryPhrase>> out;
  for (const auto& r : select_method(records, method)) out[r.thread_id] = r.phrases;
  return out;
}

ClusterFile cluster_method(std::span<const SummaryRecord> records, std::string_view method,
                           const TfIdfModel& model, const ClusterOptions& options) {
  const auto selected = select_method(records, method);
  if (selected.empty()) throw Error("no " + std::string(method) + " summaries to cluster");
  ClusterFile f;
  f.linkage = options.linkage;
  for (const auto& r : selected) f.vectors.push_back(vectorize_summary(r.thread_id, r.phrases, model, options.scheme));
  f.assignment = agglomerative_cluster(f.vectors, options.k, options.linkage, std::string(method));
  for (std::size_t i = 0; i < model.size(); ++i) f.vocabulary.push_back(model.word(i));
  return f;
}

ClusterFile read_cluster_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return cluster_file_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error("'" + path + "': " + e.what());
  }
}

std::string format_number(double x, int precision) {
  if (std::isinf(x)) return "inf";
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << x;
  return s.str();
}

std::string format_stats(const CorpusStats& s) {
  std::ostringstream out;
  auto row = [&](std::string_view name, const std::string& v) { out << std::left << std::setw(28) << name << v << '\n'; };
  row("Posts", std::to_string(s.n_posts));
  row("Comments", std::to_string(s.n_comments));
  row("Avg. comments per post", format_number(s.avg_comments_per_post));
  row("Avg. post length (words)", format_number(s.avg_post_len_words));
  row("Avg. comment length (words)", format_number(s.avg_comment_len_words));
  row("Avg. thread span (days)", format_number(s.avg_thread_span_days));
  return out.str();
}

std::string stats_csv(const CorpusStats& s) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "n_posts,n_comments,avg_comments_per_post,avg_post_len_words,avg_comment_len_words,avg_thread_span_days\n";
  out << s.n_posts << ',' << s.n_comments << ',' << s.avg_comments_per_post << ',' << s.avg_post_len_words << ','
      << s.avg_comment_len_words << ',' << s.avg_thread_span_days << '\n';
  return out.str();
}

std::string format_report_table(std::span<const MetricsReport> reports) {
  std::ostringstream out;
  auto ms = [](const Stat& s) { return format_number(s.mean) + " ± " + format_number(s.sd); };
  out << std::left << std::setw(8) << "Method" << std::setw(6) << "k" << std::setw(18) << "u(C)" << std::setw(18)
      << "n(C)" << std::setw(18) << "a(C)" << std::setw(12) << "Silhouette" << std::setw(12) << "CH" << "DBI\n";
  for (const auto& r : reports) {
    // setw counts bytes, and "±" is two of them.
    out << std::left << std::setw(8) << r.method_tag << std::setw(6) << r.k << std::setw(19) << ms(r.context.u)
        << std::setw(19) << ms(r.context.n) << std::setw(19) << ms(r.context.a) << std::setw(12)
        << format_number(r.silhouette, 4) << std::setw(12) << format_number(r.calinski_harabasz, 2)
        << format_number(r.davies_bouldin, 4) << '\n';
  }
  return out.str();
}

std::vector<std::string> condensed_align_warnings(const std::vector<std::string>& warnings) {
  std::vector<std::string> out;
  std::size_t unknown = 0;
  for (const auto& w : warnings) {
    if (w.starts_with("annotation for unknown comment id"))
      ++unknown;
    else
      out.push_back(w);
  }
  if (unknown > 0) out.push_back("dropped annotations for " + std::to_string(unknown) + " unknown comment ids");
  return out;
}

namespace {

const TomlValue* toml_get(const TomlTable& t, const std::string& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

std::string toml_string(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Kind::string) throw Error("config: '" + key + "' must be a string");
  return v.s;
}

std::int64_t toml_int(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Kind::integer) throw Error("config: '" + key + "' must be an integer");
  return v.i;
}

std::size_t toml_count(const TomlValue& v, const std::string& key) {
  const auto i = toml_int(v, key);
  if (i < 0) throw Error("config: '" + key + "' must be non-negative");
  return static_cast<std::size_t>(i);
}

}  // namespace

RunConfig run_config_from_toml(const TomlTable& t, const std::filesystem::path& base_dir) {
  static const std::set<std::string> known{
      "input.threads", "input.conllu",   "input.lexicon",  "input.model",       "input.stopwords",
      "output.dir",    "cluster.k",      "cluster.methods", "cluster.linkage",  "cluster.vectors",
      "yake.ngrams",   "yake.top_k",     "yake.dedup",     "yake.window",       "sentiment.match_window",
      "metrics.silhouette_distance",     "run.jobs",       "run.seed"};
  for (const auto& [key, _] : t)
    if (!known.contains(key)) throw Error("config: unknown key '" + key + "'");

  RunConfig c;
  auto path = [&](const std::string& key, std::string& dst) {
    if (const auto* v = toml_get(t, key)) {
      const auto s = toml_string(*v, key);
      dst = s.empty() ? s : (base_dir / s).lexically_normal().string();
    }
  };
  path("input.threads", c.threads);
  path("input.conllu", c.conllu);
  path("input.lexicon", c.lexicon);
  path("input.model", c.model);
  path("input.stopwords", c.stopwords);
  path("output.dir", c.out_dir);

  if (const auto* v = toml_get(t, "cluster.k")) {
    c.k.clear();
    if (v->kind == TomlValue::Kind::array)
      for (const auto& x : v->items) c.k.push_back(toml_count(x, "cluster.k"));
    else
      c.k.push_back(toml_count(*v, "cluster.k"));
  }
  if (const auto* v = toml_get(t, "cluster.methods")) {
    if (v->kind != TomlValue::Kind::array) throw Error("config: 'cluster.methods' must be an array");
    c.methods.clear();
    for (const auto& x : v->items) c.methods.push_back(toml_string(x, "cluster.methods"));
  }
  if (const auto* v = toml_get(t, "cluster.linkage")) {
    const auto l = parse_linkage(toml_string(*v, "cluster.linkage"));
    if (!l) throw Error("config: unknown linkage '" + v->s + "'");
    c.linkage = *l;
  }
  if (const auto* v = toml_get(t, "cluster.vectors")) {
    const auto s = parse_vector_scheme(toml_string(*v, "cluster.vectors"));
    if (!s) throw Error("config: unknown vector scheme '" + v->s + "'");
    c.scheme = *s;
  }
  if (const auto* v = toml_get(t, "yake.ngrams")) {
    if (v->kind != TomlValue::Kind::array) throw Error("config: 'yake.ngrams' must be an array");
    c.yake.ngram_sizes.clear();
    for (const auto& x : v->items) c.yake.ngram_sizes.insert(static_cast<int>(toml_int(x, "yake.ngrams")));
  }
  if (const auto* v = toml_get(t, "yake.top_k")) c.yake.top_k = toml_count(*v, "yake.top_k");
  if (const auto* v = toml_get(t, "yake.dedup")) {
    if (!v->is_number()) throw Error("config: 'yake.dedup' must be a number");
    c.yake.dedup_threshold = v->number();
  }
  if (const auto* v = toml_get(t, "yake.window"))
    c.yake.window = static_cast<int>(toml_int(*v, "yake.window"));
  if (const auto* v = toml_get(t, "sentiment.match_window"))
    c.match_window = toml_count(*v, "sentiment.match_window");
  if (const auto* v = toml_get(t, "metrics.silhouette_distance")) {
    const auto d = parse_distance(toml_string(*v, "metrics.silhouette_distance"));
    if (!d) throw Error("config: unknown distance '" + v->s + "'");
    c.silhouette_distance = *d;
  }
  if (const auto* v = toml_get(t, "run.jobs")) c.jobs = toml_count(*v, "run.jobs");
  if (const auto* v = toml_get(t, "run.seed")) c.seed = toml_count(*v, "run.seed");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_toml(load_toml(path), std::filesystem::path(path).parent_path());
}

RunResult run_pipeline(const RunConfig& config, std::ostream* log) {
  auto note = [&](const std::string& s) {
    if (log) *log << s << '\n';
  };
  run_stage("config", [&] { config.validate(); });
  const std::filesystem::path dir(config.out_dir);
  run_stage("config", [&] { std::filesystem::create_directories(dir); });
  auto at = [&](std::string_view name) { return (dir / name).string(); };

  const Corpus corpus = run_stage("ingest", [&] {
    auto in = open_input(config.threads);
    auto r = ingest_threads(in);
    for (const auto& d : r.errors) note("ingest: skipped " + to_string(d));
    for (const auto& d : r.warnings) note("ingest: warning " + to_string(d));
    auto c = preprocess(r.corpus);
    save_corpus(at("corpus.bin"), c);
    note("ingest: " + std::to_string(c.size()) + " threads");
    return c;
  });

  const auto conllu = run_stage("annotate", [&] {
    auto r = read_conllu_file(config.conllu);
    for (const auto& rej : r.rejected)
      note("annotate: rejected sentence " + std::to_string(rej.sentence_ordinal) + " (line " +
           std::to_string(rej.line) + "): " + rej.reason);
    return r;
  });
  const auto aligned = run_stage("align", [&] {
    auto a = align(corpus, conllu.comments);
    for (const auto& w : condensed_align_warnings(a.warnings)) note("align: " + w);
    note("align: coverage " + format_number(a.coverage, 4));
    return a;
  });

  const auto pairs = run_stage("extract", [&] {
    auto p = extract_corpus(aligned, config.jobs);
    auto out = open_output(at("pairs.jsonl"));
    write_pairs(out, p);
    return p;
  });

  const auto docs = comment_documents(corpus, &conllu.comments);
  const auto model = run_stage("fit-tfidf", [&] {
    auto m = config.model.empty() ? fit_corpus_model(docs) : load_model(config.model);
    save_model(at("model.tfidf"), m);
    note("fit-tfidf: vocabulary " + std::to_string(m.size()));
    return m;
  });

  std::vector<SummaryRecord> summaries = run_stage("summarize", [&] {
    auto s = summarize_corpus(pairs, model);
    write_summaries_file(at("summaries.jsonl"), s);
    return s;
  });

  run_stage("sentiment", [&] {
    const auto lexicon = config.lexicon.empty() ? SentimentLexicon::bundled() : [&] {
      auto in = open_input(config.lexicon);
      return SentimentLexicon::load_tsv(in);
    }();
    const LexiconScorer scorer(lexicon);
    const auto aspects = sentiment_corpus(pairs, docs, scorer, config.match_window, config.jobs);
    auto out = open_output(at("aspects.jsonl"));
    std::vector<SummaryRecord> vr;
    for (const auto& ta : aspects) {
      out << to_json(ta).dump() << '\n';
      vr.push_back(variant_record(ta));
    }
    write_summaries_file(at("vr.jsonl"), vr);
    summaries.insert(summaries.end(), vr.begin(), vr.end());
  });

  run_stage("yake", [&] {
    const auto stopwords = config.stopwords.empty() ? bundled_stopwords() : [&] {
      auto in = open_input(config.stopwords);
      return load_stopwords(in);
    }();
    const auto y = yake_corpus(corpus, config.yake, stopwords, UposTable(conllu.comments), config.jobs);
    write_summaries_file(at("yake.jsonl"), y);
    summaries.insert(summaries.end(), y.begin(), y.end());
  });

  std::vector<ClusterFile> clusterings;
  run_stage("cluster", [&] {
    for (const auto& method : config.methods) {
      for (auto k : config.k) {
        auto f = cluster_method(summaries, method, model, ClusterOptions{k, config.linkage, config.scheme});
        write_json_file(at("clusters_" + method + "_k" + std::to_string(k) + ".json"), to_json(f));
        clusterings.push_back(std::move(f));
      }
    }
  });

  RunResult result;
  run_stage("metrics", [&] {
    const MetricsOptions options{config.silhouette_distance, config.jobs};
    for (const auto& f : clusterings)
      result.reports.push_back(evaluate(f, phrases_by_thread(summaries, f.assignment.method_tag), options));
    write_json_file(at("report.json"), reports_to_json(result.reports));
    auto hist = open_output(at("hist.csv"));
    write_hist_csv(hist, result.reports);
    result.table = format_report_table(result.reports);
    std::ofstream(at("report.txt")) << result.table;
  });
  return result;
}

}  // namespace intent_miner

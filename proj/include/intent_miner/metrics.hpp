#pragma once

// Cluster quality (Silhouette, Calinski-Harabasz, Davies-Bouldin) and the
// per-cluster context metrics of phrase summaries.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intent_miner/annotation.hpp"
#include "intent_miner/clustering.hpp"
#include "intent_miner/error.hpp"
#include "intent_miner/parallel.hpp"
#include "intent_miner/scoring.hpp"

namespace intent_miner {

inline constexpr double kInfinitySentinel = std::numeric_limits<double>::infinity();

enum class Distance { cosine, euclidean };

inline std::optional<Distance> parse_distance(std::string_view s) {
  if (s == "cosine") return Distance::cosine;
  if (s == "euclidean") return Distance::euclidean;
  return std::nullopt;
}

inline std::string_view to_string(Distance d) { return d == Distance::cosine ? "cosine" : "euclidean"; }

inline double squared_euclidean(const SparseVector& a, const SparseVector& b) {
  const double d = a.dot(a) + b.dot(b) - 2.0 * a.dot(b);
  return d < 1e-20 ? 0.0 : d;
}

inline double distance(const SparseVector& a, const SparseVector& b, Distance kind) {
  if (kind == Distance::cosine) return std::max(0.0, 1.0 - cosine(a, b));
  return std::sqrt(squared_euclidean(a, b));
}

namespace detail {

inline void check_assignment(std::span<const PhraseVector> vectors, const ClusterAssignment& a) {
  if (vectors.size() != a.labels.size()) throw Error("metrics: vector count differs from assignment size");
  for (auto l : a.labels)
    if (l >= a.k) throw Error("metrics: cluster label out of range");
}

// Dense centroids over the union of vector ids.
struct Geometry {
  std::size_t dim = 0;
  std::vector<std::vector<double>> centroids;
  std::vector<double> overall;
  std::vector<std::size_t> sizes;
};

inline Geometry centroids(std::span<const PhraseVector> vectors, const ClusterAssignment& a) {
  Geometry g;
  for (const auto& v : vectors)
    for (const auto& [id, _] : v.weights.entries()) g.dim = std::max<std::size_t>(g.dim, id + 1);
  g.centroids.assign(a.k, std::vector<double>(g.dim, 0.0));
  g.overall.assign(g.dim, 0.0);
  g.sizes.assign(a.k, 0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    ++g.sizes[a.labels[i]];
    for (const auto& [id, x] : vectors[i].weights.entries()) {
      g.centroids[a.labels[i]][id] += x;
      g.overall[id] += x;
    }
  }
  for (std::size_t c = 0; c < a.k; ++c)
    if (g.sizes[c] > 0)
      for (auto& x : g.centroids[c]) x /= static_cast<double>(g.sizes[c]);
  if (!vectors.empty())
    for (auto& x : g.overall) x /= static_cast<double>(vectors.size());
  return g;
}

// Walks every centroid coordinate; expanding |x|^2 - 2x.c + |c|^2 cancels
// badly for points close to their centroid.
inline double squared_to_dense(const SparseVector& v, const std::vector<double>& c) {
  double d = 0.0;
  auto e = v.entries().begin();
  for (std::size_t i = 0; i < c.size(); ++i) {
    double x = 0.0;
    if (e != v.entries().end() && e->first == i) x = (e++)->second;
    d += (x - c[i]) * (x - c[i]);
  }
  return d < 1e-20 ? 0.0 : d;
}

inline double dense_sq(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d < 1e-20 ? 0.0 : d;
}

}  // namespace detail

inline double silhouette(std::span<const PhraseVector> vectors, const ClusterAssignment& a,
                         Distance kind = Distance::cosine, std::size_t jobs = 1) {
  detail::check_assignment(vectors, a);
  if (a.k < 2) throw Error("silhouette: needs k >= 2");
  const std::size_t n = vectors.size();
  if (n == 0) return 0.0;
  std::vector<std::size_t> sizes(a.k, 0);
  for (auto l : a.labels) ++sizes[l];
  std::vector<double> s(n, 0.0);
  parallel_for(n, jobs, [&](std::size_t i) {
    const auto own = a.labels[i];
    if (sizes[own] < 2) return;
    std::vector<double> sum(a.k, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sum[a.labels[j]] += distance(vectors[i].weights, vectors[j].weights, kind);
    const double ai = sum[own] / static_cast<double>(sizes[own] - 1);
    double bi = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < a.k; ++c)
      if (c != own && sizes[c] > 0) bi = std::min(bi, sum[c] / static_cast<double>(sizes[c]));
    if (!std::isfinite(bi)) return;
    const double m = std::max(ai, bi);
    s[i] = m == 0.0 ? 0.0 : (bi - ai) / m;
  });
  double total = 0.0;
  for (double x : s) total += x;
  return total / static_cast<double>(n);
}

/// Returns kInfinitySentinel when the within-cluster dispersion is zero.
inline double calinski_harabasz(std::span<const PhraseVector> vectors, const ClusterAssignment& a) {
  detail::check_assignment(vectors, a);
  const std::size_t n = vectors.size();
  if (a.k < 2) throw Error("calinski_harabasz: needs k >= 2");
  if (n <= a.k) throw Error("calinski_harabasz: needs more points than clusters");
  const auto g = detail::centroids(vectors, a);
  double within = 0.0, between = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    within += detail::squared_to_dense(vectors[i].weights, g.centroids[a.labels[i]]);
  for (std::size_t c = 0; c < a.k; ++c)
    between += static_cast<double>(g.sizes[c]) * detail::dense_sq(g.centroids[c], g.overall);
  if (within == 0.0) return kInfinitySentinel;
  return (between / static_cast<double>(a.k - 1)) / (within / static_cast<double>(n - a.k));
}

/// Returns kInfinitySentinel when two centroids coincide.
inline double davies_bouldin(std::span<const PhraseVector> vectors, const ClusterAssignment& a) {
  detail::check_assignment(vectors, a);
  if (a.k < 2) throw Error("davies_bouldin: needs k >= 2");
  const auto g = detail::centroids(vectors, a);
  std::vector<double> sigma(a.k, 0.0);
  for (std::size_t c = 0; c < a.k; ++c) {
    for (std::size_t i = 0; i < vectors.size(); ++i)
      if (a.labels[i] == c) sigma[c] += std::sqrt(detail::squared_to_dense(vectors[i].weights, g.centroids[c]));
    if (g.sizes[c] > 0) sigma[c] /= static_cast<double>(g.sizes[c]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.k; ++j) {
      if (i == j) continue;
      const double d = std::sqrt(detail::dense_sq(g.centroids[i], g.centroids[j]));
      if (d == 0.0) return kInfinitySentinel;
      worst = std::max(worst, (sigma[i] + sigma[j]) / d);
    }
    total += worst;
  }
  return total / static_cast<double>(a.k);
}

struct PhraseContext {
  std::size_t unique_words = 0;
  std::size_t ao_pairs = 0;
  std::size_t noun_chunks = 0;
};

/// Noun chunks: adjacent noun-noun words. Action-object pairs: unordered
/// (VERB, NOUN) or (ADJ, NOUN) words at most three positions apart. Both are
/// counted inside each phrase only.
inline PhraseContext context_of(std::span<const SummaryPhrase> phrases) {
  PhraseContext out;
  std::set<std::string> words;
  for (const auto& p : phrases) {
    const auto w = p.words();
    words.insert(w.begin(), w.end());
    const auto& tags = p.upos;
    for (std::size_t i = 0; i + 1 < tags.size(); ++i)
      if (is_noun_tag(tags[i]) && is_noun_tag(tags[i + 1])) ++out.noun_chunks;
    for (std::size_t i = 0; i < tags.size(); ++i) {
      for (std::size_t j = i + 1; j < tags.size() && j - i <= 3; ++j) {
        const bool ni = is_noun_tag(tags[i]), nj = is_noun_tag(tags[j]);
        const bool ai = is_verb_tag(tags[i]) || is_adj_tag(tags[i]);
        const bool aj = is_verb_tag(tags[j]) || is_adj_tag(tags[j]);
        if ((ai && nj) || (aj && ni)) ++out.ao_pairs;
      }
    }
  }
  out.unique_words = words.size();
  return out;
}

struct Stat {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for fewer than two values
};

inline Stat mean_sd(std::span<const double> xs) {
  Stat s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return s;
  double sq = 0.0;
  for (double x : xs) sq += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  return s;
}

struct ContextMetrics {
  std::vector<double> unique_words, ao_pairs, noun_chunks;  // one entry per cluster
  Stat u, a, n;
};

/// `summaries` maps thread id to that thread's phrase list for the method
/// being evaluated; threads without an entry contribute nothing.
inline ContextMetrics context_metrics(const ClusterAssignment& assignment,
                                      const std::map<std::string, std::vector<SummaryPhrase>>& summaries) {
  ContextMetrics cm;
  std::vector<std::vector<SummaryPhrase>> clusters(assignment.k);
  for (std::size_t i = 0; i < assignment.thread_ids.size(); ++i) {
    if (auto it = summaries.find(assignment.thread_ids[i]); it != summaries.end()) {
      auto& dst = clusters.at(assignment.labels.at(i));
      dst.insert(dst.end(), it->second.begin(), it->second.end());
    }
  }
  for (const auto& c : clusters) {
    const auto ctx = context_of(c);
    cm.unique_words.push_back(static_cast<double>(ctx.unique_words));
    cm.ao_pairs.push_back(static_cast<double>(ctx.ao_pairs));
    cm.noun_chunks.push_back(static_cast<double>(ctx.noun_chunks));
  }
  cm.u = mean_sd(cm.unique_words);
  cm.a = mean_sd(cm.ao_pairs);
  cm.n = mean_sd(cm.noun_chunks);
  return cm;
}

struct MetricsReport {
  std::string method_tag;
  std::size_t k = 0;
  std::size_t n_threads = 0;
  double silhouette = 0.0;
  double calinski_harabasz = 0.0;
  double davies_bouldin = 0.0;
  ContextMetrics context;
};

struct MetricsOptions {
  Distance silhouette_distance = Distance::cosine;
  std::size_t jobs = 1;
};

inline MetricsReport evaluate(const ClusterFile& clusters,
                              const std::map<std::string, std::vector<SummaryPhrase>>& summaries,
                              const MetricsOptions& options = {}) {
  const auto& a = clusters.assignment;
  MetricsReport r;
  r.method_tag = a.method_tag;
  r.k = a.k;
  r.n_threads = a.thread_ids.size();
  r.silhouette = silhouette(clusters.vectors, a, options.silhouette_distance, options.jobs);
  r.calinski_harabasz = calinski_harabasz(clusters.vectors, a);
  r.davies_bouldin = davies_bouldin(clusters.vectors, a);
  r.context = context_metrics(a, summaries);
  return r;
}

namespace detail {

// JSON has no infinity; the sentinel is written as the string "inf".
inline nlohmann::ordered_json metric_value(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method_tag;
  j["k"] = r.k;
  j["n_threads"] = r.n_threads;
  j["silhouette"] = detail::metric_value(r.silhouette);
  j["calinski_harabasz"] = detail::metric_value(r.calinski_harabasz);
  j["davies_bouldin"] = detail::metric_value(r.davies_bouldin);
  auto stat = [](const std::vector<double>& xs, const Stat& s) {
    nlohmann::ordered_json o;
    o["mean"] = s.mean;
    o["sd"] = s.sd;
    o["per_cluster"] = xs;
    return o;
  };
  j["context"]["unique_words"] = stat(r.context.unique_words, r.context.u);
  j["context"]["ao_pairs"] = stat(r.context.ao_pairs, r.context.a);
  j["context"]["noun_chunks"] = stat(r.context.noun_chunks, r.context.n);
  return j;
}

inline nlohmann::ordered_json reports_to_json(std::span<const MetricsReport> reports) {
  nlohmann::ordered_json j;
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) j["reports"].push_back(to_json(r));
  return j;
}

inline void write_hist_csv(std::ostream& out, std::span<const MetricsReport> reports, bool header = true) {
  if (header) out << "method,k,cluster_id,metric,value\n";
  for (const auto& r : reports) {
    auto rows = [&](std::string_view metric, const std::vector<double>& xs) {
      for (std::size_t c = 0; c < xs.size(); ++c)
        out << r.method_tag << ',' << r.k << ',' << c << ',' << metric << ',' << xs[c] << '\n';
    };
    rows("unique_words", r.context.unique_words);
    rows("ao_pairs", r.context.ao_pairs);
    rows("noun_chunks", r.context.noun_chunks);
  }
}

}  // namespace intent_miner

#pragma once

// Phrase-bag thread vectors and bottom-up agglomerative clustering over
// cosine similarity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "intent_miner/error.hpp"
#include "intent_miner/scoring.hpp"

namespace intent_miner {

/// Sparse vector with entries sorted by strictly increasing id.
class SparseVector {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  SparseVector() = default;

  static SparseVector from_map(const std::map<std::uint32_t, double>& m) {
    SparseVector v;
    for (const auto& [id, w] : m)
      if (w != 0.0) v.entries_.emplace_back(id, w);
    return v;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  double dot(const SparseVector& o) const {
    double s = 0.0;
    auto a = entries_.begin(), b = o.entries_.begin();
    while (a != entries_.end() && b != o.entries_.end()) {
      if (a->first < b->first) ++a;
      else if (b->first < a->first) ++b;
      else s += (a++)->second * (b++)->second;
    }
    return s;
  }

  double norm() const { return std::sqrt(dot(*this)); }

  SparseVector scaled(double f) const {
    SparseVector v = *this;
    for (auto& e : v.entries_) e.second *= f;
    return v;
  }

  bool operator==(const SparseVector&) const = default;

 private:
  std::vector<Entry> entries_;
};

inline double cosine(const SparseVector& a, const SparseVector& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

struct PhraseVector {
  std::string thread_id;
  SparseVector weights;  // L2-normalized unless zero
  double norm = 0.0;     // of the stored weights: 1 or 0
  bool zero = true;
};

enum class VectorScheme {
  ti_weighted,  // word count in the summary times TI_w
  binary,       // 1 per distinct in-vocabulary word
};

inline std::optional<VectorScheme> parse_vector_scheme(std::string_view s) {
  if (s == "ti") return VectorScheme::ti_weighted;
  if (s == "binary") return VectorScheme::binary;
  return std::nullopt;
}

/// Bag of the words of the summary's phrases over the model vocabulary,
/// L2-normalized. Out-of-vocabulary words carry no weight.
inline PhraseVector vectorize_summary(std::string thread_id, std::span<const SummaryPhrase> phrases,
                                      const TfIdfModel& model, VectorScheme scheme = VectorScheme::ti_weighted) {
  std::map<std::uint32_t, double> bag;
  for (const auto& p : phrases) {
    for (const auto& w : p.words()) {
      const auto id = model.id_of(w);
      if (!id) continue;
      const auto key = static_cast<std::uint32_t>(*id);
      if (scheme == VectorScheme::binary) bag[key] = 1.0;
      else bag[key] += model.composite(*id);
    }
  }
  PhraseVector v{std::move(thread_id), SparseVector::from_map(bag), 0.0, true};
  const double n = v.weights.norm();
  if (n > 0.0) {
    v.weights = v.weights.scaled(1.0 / n);
    v.norm = v.weights.norm();
    v.zero = false;
  }
  return v;
}

enum class Linkage { upgma, single, complete };

inline std::optional<Linkage> parse_linkage(std::string_view s) {
  if (s == "upgma" || s == "average") return Linkage::upgma;
  if (s == "single") return Linkage::single;
  if (s == "complete") return Linkage::complete;
  return std::nullopt;
}

inline std::string_view to_string(Linkage l) {
  switch (l) {
    case Linkage::upgma: return "upgma";
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
  }
  return "upgma";
}

struct ClusterAssignment {
  std::size_t k = 0;
  std::string method_tag;
  std::vector<std::string> thread_ids;  // input order
  std::vector<std::size_t> labels;      // parallel to thread_ids, in [0, k)
  std::vector<double> merge_similarities;

  std::vector<std::vector<std::size_t>> members() const {
    std::vector<std::vector<std::size_t>> m(k);
    for (std::size_t i = 0; i < labels.size(); ++i) m[labels[i]].push_back(i);
    return m;
  }
};

/// Merges the most similar pair of clusters until k remain. Ties go to the
/// lowest (cluster id, cluster id) pair, where a merged cluster keeps the
/// lower id. Zero vectors sit out the merging and join cluster 0, unless
/// there are fewer than k non-zero vectors. Final labels are numbered by
/// first member in input order.
inline ClusterAssignment agglomerative_cluster(std::span<const PhraseVector> vectors, std::size_t k,
                                               Linkage linkage = Linkage::upgma, std::string method_tag = {}) {
  const std::size_t n = vectors.size();
  if (k < 1) throw Error("clustering: k must be >= 1");
  if (k > n) throw Error("clustering: k = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " threads");

  std::vector<std::size_t> active_points;
  for (std::size_t i = 0; i < n; ++i)
    if (!vectors[i].zero) active_points.push_back(i);
  const bool hold_out_zero = active_points.size() >= k;
  if (!hold_out_zero) {
    active_points.resize(n);
    for (std::size_t i = 0; i < n; ++i) active_points[i] = i;
  }
  const std::size_t m = active_points.size();

  // link[i*m + j]: summed similarity (UPGMA) or extreme similarity (single/complete).
  std::vector<double> link(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      link[i * m + j] = link[j * m + i] =
          vectors[active_points[i]].weights.dot(vectors[active_points[j]].weights);
  std::vector<double> size(m, 1.0);
  std::vector<bool> alive(m, true);
  std::vector<std::vector<std::size_t>> members(m);
  for (std::size_t i = 0; i < m; ++i) members[i] = {i};

  auto value = [&](std::size_t a, std::size_t b) {
    const double l = link[a * m + b];
    return linkage == Linkage::upgma ? l / (size[a] * size[b]) : l;
  };
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> best(m, none);
  auto recompute = [&](std::size_t a) {
    best[a] = none;
    double bv = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      if (j == a || !alive[j]) continue;
      const double v = value(a, j);
      if (v > bv) {
        bv = v;
        best[a] = j;
      }
    }
  };
  for (std::size_t i = 0; i < m; ++i) recompute(i);

  ClusterAssignment out;
  out.k = k;
  out.method_tag = std::move(method_tag);
  std::size_t clusters = m;
  while (clusters > k) {
    std::size_t a = none;
    double bv = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (!alive[i] || best[i] == none) continue;
      const double v = value(i, best[i]);
      if (v > bv) {
        bv = v;
        a = i;
      }
    }
    std::size_t b = best[a];
    if (b < a) std::swap(a, b);
    out.merge_similarities.push_back(bv);

    for (std::size_t c = 0; c < m; ++c) {
      if (!alive[c] || c == a || c == b) continue;
      double& ac = link[a * m + c];
      const double bc = link[b * m + c];
      switch (linkage) {
        case Linkage::upgma: ac += bc; break;
        case Linkage::single: ac = std::max(ac, bc); break;
        case Linkage::complete: ac = std::min(ac, bc); break;
      }
      link[c * m + a] = ac;
    }
    size[a] += size[b];
    alive[b] = false;
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
    --clusters;

    recompute(a);
    for (std::size_t c = 0; c < m; ++c) {
      if (!alive[c] || c == a) continue;
      if (best[c] == a || best[c] == b) {
        recompute(c);
      } else if (best[c] != none) {
        const double va = value(c, a), vb = value(c, best[c]);
        if (va > vb || (va == vb && a < best[c])) best[c] = a;
      }
    }
  }

  // Number clusters by their first member in input order.
  std::vector<std::size_t> labels(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (first point, root)
  for (std::size_t r = 0; r < m; ++r) {
    if (!alive[r]) continue;
    std::size_t first = none;
    for (auto mi : members[r]) first = std::min(first, active_points[mi]);
    order.emplace_back(first, r);
  }
  std::sort(order.begin(), order.end());
  for (std::size_t label = 0; label < order.size(); ++label)
    for (auto mi : members[order[label].second]) labels[active_points[mi]] = label;
  // Held-out zero vectors have zero similarity to every centroid: cluster 0.
  out.thread_ids.reserve(n);
  for (const auto& v : vectors) out.thread_ids.push_back(v.thread_id);
  out.labels = std::move(labels);
  return out;
}

/// Contents of clusters.json. The vectors are stored by word so that the
/// metrics stage needs no model.
struct ClusterFile {
  ClusterAssignment assignment;
  Linkage linkage = Linkage::upgma;
  std::vector<PhraseVector> vectors;  // parallel to assignment.thread_ids
  std::vector<std::string> vocabulary;  // id -> word for the vector entries
};

inline nlohmann::ordered_json to_json(const ClusterFile& f) {
  const auto& a = f.assignment;
  if (f.vectors.size() != a.thread_ids.size()) throw Error("clusters: vector count differs from thread count");
  nlohmann::ordered_json j;
  j["method"] = a.method_tag;
  j["k"] = a.k;
  j["linkage"] = std::string(to_string(f.linkage));
  j["merge_similarities"] = a.merge_similarities;
  j["threads"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < a.thread_ids.size(); ++i) {
    nlohmann::ordered_json t;
    t["thread_id"] = a.thread_ids[i];
    t["cluster"] = a.labels[i];
    auto w = nlohmann::ordered_json::array();
    for (const auto& [id, x] : f.vectors[i].weights.entries()) w.push_back({f.vocabulary.at(id), x});
    t["vector"] = std::move(w);
    j["threads"].push_back(std::move(t));
  }
  return j;
}

inline ClusterFile cluster_file_from_json(const nlohmann::json& j) {
  ClusterFile f;
  auto& a = f.assignment;
  try {
    a.method_tag = j.at("method").get<std::string>();
    a.k = j.at("k").get<std::size_t>();
    const auto linkage = parse_linkage(j.value("linkage", std::string("upgma")));
    if (!linkage) throw Error("clusters: unknown linkage");
    f.linkage = *linkage;
    if (j.contains("merge_similarities")) a.merge_similarities = j["merge_similarities"].get<std::vector<double>>();
    std::map<std::string, std::uint32_t> vocab;
    for (const auto& t : j.at("threads"))
      for (const auto& e : t.at("vector")) vocab.emplace(e.at(0).get<std::string>(), 0);
    std::uint32_t next = 0;
    for (auto& [w, id] : vocab) {
      id = next++;
      f.vocabulary.push_back(w);
    }
    for (const auto& t : j.at("threads")) {
      a.thread_ids.push_back(t.at("thread_id").get<std::string>());
      const auto label = t.at("cluster").get<std::size_t>();
      if (label >= a.k) throw Error("clusters: label " + std::to_string(label) + " out of range");
      a.labels.push_back(label);
      std::map<std::uint32_t, double> m;
      for (const auto& e : t.at("vector")) m[vocab.at(e.at(0).get<std::string>())] = e.at(1).get<double>();
      PhraseVector v{a.thread_ids.back(), SparseVector::from_map(m), 0.0, true};
      v.norm = v.weights.norm();
      v.zero = v.weights.empty();
      f.vectors.push_back(std::move(v));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("clusters: ") + e.what());
  }
  return f;
}

}  // namespace intent_miner

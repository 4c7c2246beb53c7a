#pragma once

// Textbook evaluations of the cluster metrics over dense points, plus a
// pairwise counter for the context metrics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "intent_miner/scoring.hpp"

namespace im_oracle {

using Point = std::vector<double>;

inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double euclid(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double cosine_distance(const Point& a, const Point& b) {
  const double na = std::sqrt(dot(a, a)), nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot(a, b) / (na * nb);
}

inline Point mean_of(const std::vector<Point>& pts, const std::vector<std::size_t>& labels, std::size_t c,
                     std::size_t dim) {
  Point m(dim, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (labels[i] != c) continue;
    for (std::size_t d = 0; d < dim; ++d) m[d] += pts[i][d];
    n += 1.0;
  }
  if (n > 0.0)
    for (auto& x : m) x /= n;
  return m;
}

template <class Dist>
double silhouette(const std::vector<Point>& pts, const std::vector<std::size_t>& labels, std::size_t k, Dist dist) {
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<double> sum(k, 0.0), cnt(k, 0.0);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      sum[labels[j]] += dist(pts[i], pts[j]);
      cnt[labels[j]] += 1.0;
    }
    if (cnt[labels[i]] == 0.0) continue;
    const double a = sum[labels[i]] / cnt[labels[i]];
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != labels[i] && cnt[c] > 0.0) b = std::min(b, sum[c] / cnt[c]);
    if (std::max(a, b) > 0.0) total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(pts.size());
}

inline double calinski_harabasz(const std::vector<Point>& pts, const std::vector<std::size_t>& labels, std::size_t k) {
  const std::size_t dim = pts.front().size();
  Point all(dim, 0.0);
  for (const auto& p : pts)
    for (std::size_t d = 0; d < dim; ++d) all[d] += p[d] / static_cast<double>(pts.size());
  double w = 0.0, b = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const auto m = mean_of(pts, labels, c, dim);
    double n = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (labels[i] != c) continue;
      w += std::pow(euclid(pts[i], m), 2);
      n += 1.0;
    }
    b += n * std::pow(euclid(m, all), 2);
  }
  if (w == 0.0) return std::numeric_limits<double>::infinity();
  return (b / static_cast<double>(k - 1)) / (w / static_cast<double>(pts.size() - k));
}

inline double davies_bouldin(const std::vector<Point>& pts, const std::vector<std::size_t>& labels, std::size_t k) {
  const std::size_t dim = pts.front().size();
  std::vector<Point> m(k);
  std::vector<double> s(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    m[c] = mean_of(pts, labels, c, dim);
    double n = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (labels[i] == c) {
        s[c] += euclid(pts[i], m[c]);
        n += 1.0;
      }
    if (n > 0.0) s[c] /= n;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double d = euclid(m[i], m[j]);
      if (d == 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, (s[i] + s[j]) / d);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

struct ContextCounts {
  double unique_words = 0, ao_pairs = 0, noun_chunks = 0;
};

/// Checks every ordered (i, j) position pair of every phrase.
inline ContextCounts count_context(const std::vector<intent_miner::SummaryPhrase>& phrases) {
  auto noun = [](const std::string& t) { return t == "NOUN" || t == "PROPN"; };
  auto action = [](const std::string& t) { return t == "VERB" || t == "ADJ"; };
  ContextCounts c;
  std::vector<std::string> seen;
  for (const auto& p : phrases) {
    std::vector<std::string> w;
    std::string cur;
    for (char ch : p.text + " ") {
      if (ch == ' ') {
        if (!cur.empty()) w.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    for (const auto& x : w)
      if (std::find(seen.begin(), seen.end(), x) == seen.end()) seen.push_back(x);
    const auto& t = p.upos;
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = 0; j < t.size(); ++j) {
        if (i == j) continue;
        const std::size_t gap = i > j ? i - j : j - i;
        if (j == i + 1 && noun(t[i]) && noun(t[j])) c.noun_chunks += 1;
        if (gap <= 3 && action(t[i]) && noun(t[j])) c.ao_pairs += 1;
      }
    }
  }
  c.unique_words = static_cast<double>(seen.size());
  return c;
}

inline void sample_mean_sd(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

}  // namespace im_oracle

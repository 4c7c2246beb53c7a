#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles/metric_oracles.hpp"
#include "support/fixtures.hpp"

using namespace intent_miner;
using im_test::dense_point;
using im_test::labelled;
using im_test::phrase;

namespace {

std::vector<PhraseVector> points(const std::vector<std::vector<double>>& xs) {
  std::vector<PhraseVector> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(dense_point("t" + std::to_string(i), xs[i]));
  return out;
}

const std::vector<std::vector<double>> kSixPoints{{0, 0}, {2, 0}, {1, 3}, {6, 6}, {8, 6}, {7, 9}};
const std::vector<std::size_t> kSixLabels{0, 0, 0, 1, 1, 1};

struct RandomInstance {
  std::vector<std::vector<double>> xs;
  std::vector<std::size_t> labels;
  std::size_t k;
};

RandomInstance random_instance(std::mt19937_64& rng) {
  RandomInstance r;
  const std::size_t n = 3 + rng() % 25;
  r.k = 2 + rng() % std::min<std::size_t>(n - 1, 6);
  const std::size_t dim = 1 + rng() % 6;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(dim);
    for (auto& x : p) x = rng() % 4 == 0 ? 0.0 : u(rng);
    r.xs.push_back(p);
    r.labels.push_back(i < r.k ? i : rng() % r.k);
  }
  return r;
}

}  // namespace

TEST(Silhouette, TightSeparatedPairs) {
  const auto v = points({{1, 0.01}, {1, 0.02}, {0.01, 1}, {0.02, 1}});
  const auto a = labelled({0, 0, 1, 1}, 2);
  EXPECT_GT(silhouette(v, a), 0.9);
  EXPECT_GT(silhouette(v, a, Distance::euclidean), 0.9);
}

TEST(Silhouette, IdenticalPointsGiveZero) {
  const auto v = points({{1, 2}, {1, 2}, {1, 2}, {1, 2}});
  EXPECT_DOUBLE_EQ(silhouette(v, labelled({0, 1, 0, 1}, 2)), 0.0);
  EXPECT_DOUBLE_EQ(silhouette(v, labelled({0, 1, 0, 1}, 2), Distance::euclidean), 0.0);
}

TEST(Silhouette, SingletonsOnlyGiveZero) {
  const auto v = points({{1, 0}, {0, 1}, {1, 1}});
  EXPECT_DOUBLE_EQ(silhouette(v, labelled({0, 1, 2}, 3)), 0.0);
}

TEST(Silhouette, NeedsTwoClusters) {
  const auto v = points({{1, 0}, {0, 1}});
  EXPECT_THROW(silhouette(v, labelled({0, 0}, 1)), Error);
  EXPECT_THROW(silhouette(v, labelled({0, 5}, 2)), Error);
}

TEST(Silhouette, ParallelMatchesSerial) {
  std::mt19937_64 rng(4);
  const auto r = random_instance(rng);
  const auto v = points(r.xs);
  const auto a = labelled(r.labels, r.k);
  EXPECT_EQ(silhouette(v, a, Distance::cosine, 1), silhouette(v, a, Distance::cosine, 4));
}

TEST(CalinskiHarabasz, SixPointHandValue) {
  // centroids (1,1) and (7,7), overall (4,4); W = 16, B = 108; (108/1) / (16/4) = 27
  EXPECT_NEAR(calinski_harabasz(points(kSixPoints), labelled(kSixLabels, 2)), 27.0, 1e-9);
}

TEST(CalinskiHarabasz, CoincidentClustersGiveSentinel) {
  const auto v = points({{1, 1}, {1, 1}, {5, 2}, {5, 2}});
  EXPECT_EQ(calinski_harabasz(v, labelled({0, 0, 1, 1}, 2)), kInfinitySentinel);
}

TEST(CalinskiHarabasz, Preconditions) {
  const auto v = points({{1, 1}, {2, 2}});
  EXPECT_THROW(calinski_harabasz(v, labelled({0, 1}, 2)), Error);
  EXPECT_THROW(calinski_harabasz(v, labelled({0, 0}, 1)), Error);
}

TEST(DaviesBouldin, SixPointHandValue) {
  // each cluster: sigma = (2 sqrt2 + 2) / 3; centroid gap = 6 sqrt2
  const double sigma = (2.0 * std::sqrt(2.0) + 2.0) / 3.0;
  EXPECT_NEAR(davies_bouldin(points(kSixPoints), labelled(kSixLabels, 2)), 2.0 * sigma / (6.0 * std::sqrt(2.0)), 1e-9);
}

TEST(DaviesBouldin, SeparatedPointClustersGiveZero) {
  const auto v = points({{1, 1}, {1, 1}, {5, 2}, {5, 2}, {0, 7}});
  EXPECT_DOUBLE_EQ(davies_bouldin(v, labelled({0, 0, 1, 1, 2}, 3)), 0.0);
}

TEST(DaviesBouldin, CoincidentCentroidsGiveSentinel) {
  const auto v = points({{0, 0}, {2, 2}, {1, 1}, {1, 1}});
  EXPECT_EQ(davies_bouldin(v, labelled({0, 0, 1, 1}, 2)), kInfinitySentinel);
}

TEST(MetricOracle, RandomInstancesMatchDirectFormulas) {
  std::mt19937_64 rng(31337);
  for (int round = 0; round < 300; ++round) {
    const auto r = random_instance(rng);
    const auto v = points(r.xs);
    const auto a = labelled(r.labels, r.k);
    ASSERT_NEAR(silhouette(v, a, Distance::euclidean), im_oracle::silhouette(r.xs, r.labels, r.k, im_oracle::euclid), 1e-9);
    ASSERT_NEAR(silhouette(v, a, Distance::cosine),
                im_oracle::silhouette(r.xs, r.labels, r.k, im_oracle::cosine_distance), 1e-9);
    const double dbi = im_oracle::davies_bouldin(r.xs, r.labels, r.k);
    if (std::isinf(dbi))
      ASSERT_EQ(davies_bouldin(v, a), kInfinitySentinel);
    else
      ASSERT_NEAR(davies_bouldin(v, a), dbi, 1e-9);
    if (r.xs.size() > r.k) {
      const double want = im_oracle::calinski_harabasz(r.xs, r.labels, r.k);
      ASSERT_NEAR(calinski_harabasz(v, a), want, 1e-9 * std::max(1.0, want));
    }
  }
}

TEST(Context, SetSemanticsForUniqueWords) {
  const std::vector<SummaryPhrase> c{phrase("get points", {"VERB", "NOUN"}), phrase("get points", {"VERB", "NOUN"})};
  const auto x = context_of(c);
  EXPECT_EQ(x.unique_words, 2u);
  EXPECT_EQ(x.ao_pairs, 2u);
}

TEST(Context, NounChunk) {
  const std::vector<SummaryPhrase> c{phrase("signup bonus", {"NOUN", "NOUN"})};
  const auto x = context_of(c);
  EXPECT_EQ(x.noun_chunks, 1u);
  EXPECT_EQ(x.ao_pairs, 0u);
}

TEST(Context, PairsStayInsidePhrases) {
  const std::vector<SummaryPhrase> c{phrase("get", {"VERB"}), phrase("point", {"NOUN"})};
  EXPECT_EQ(context_of(c).ao_pairs, 0u);
  const std::vector<SummaryPhrase> far{phrase("get a b c point", {"VERB", "DET", "ADJ", "ADV", "PROPN"})};
  EXPECT_EQ(context_of(far).ao_pairs, 1u);  // ADJ-PROPN only; VERB-PROPN is 4 apart
}

TEST(ContextOracle, RandomClustersMatchBruteForce) {
  std::mt19937_64 rng(2718);
  for (int round = 0; round < 500; ++round) {
    const std::size_t n = 1 + rng() % 20, k = 1 + rng() % n;
    std::vector<std::size_t> labels;
    std::map<std::string, std::vector<SummaryPhrase>> summaries;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(i < k ? i : rng() % k);
      if (rng() % 8 == 0) continue;  // thread without a summary
      auto& s = summaries["t" + std::to_string(i)];
      for (std::size_t p = rng() % 11; p > 0; --p) s.push_back(im_test::random_phrase(rng));
    }
    const auto a = labelled(labels, k);
    const auto cm = context_metrics(a, summaries);
    ASSERT_EQ(cm.unique_words.size(), k);
    std::vector<double> u, ao, nc;
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<SummaryPhrase> all;
      for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == c)
          if (auto it = summaries.find("t" + std::to_string(i)); it != summaries.end())
            all.insert(all.end(), it->second.begin(), it->second.end());
      const auto want = im_oracle::count_context(all);
      ASSERT_EQ(cm.unique_words[c], want.unique_words);
      ASSERT_EQ(cm.ao_pairs[c], want.ao_pairs);
      ASSERT_EQ(cm.noun_chunks[c], want.noun_chunks);
      u.push_back(want.unique_words);
      ao.push_back(want.ao_pairs);
      nc.push_back(want.noun_chunks);
    }
    double mean = 0, sd = 0;
    im_oracle::sample_mean_sd(u, mean, sd);
    ASSERT_NEAR(cm.u.mean, mean, 1e-9);
    ASSERT_NEAR(cm.u.sd, sd, 1e-9);
    im_oracle::sample_mean_sd(ao, mean, sd);
    ASSERT_NEAR(cm.a.mean, mean, 1e-9);
    ASSERT_NEAR(cm.a.sd, sd, 1e-9);
    im_oracle::sample_mean_sd(nc, mean, sd);
    ASSERT_NEAR(cm.n.mean, mean, 1e-9);
    ASSERT_NEAR(cm.n.sd, sd, 1e-9);
  }
}

TEST(Stat, SampleStandardDeviation) {
  const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  const auto s = mean_sd(xs);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_NEAR(s.sd, std::sqrt(32.0 / 7.0), 1e-12);
  const std::vector<double> one{3};
  EXPECT_EQ(mean_sd(one).sd, 0.0);
}

TEST(Report, JsonWritesInfinityAsString) {
  MetricsReport r;
  r.method_tag = "VN";
  r.k = 2;
  r.calinski_harabasz = kInfinitySentinel;
  r.context.unique_words = {3, 5};
  r.context.u = mean_sd(r.context.unique_words);
  const auto j = reports_to_json(std::vector<MetricsReport>{r});
  EXPECT_EQ(j["reports"][0]["calinski_harabasz"], "inf");
  EXPECT_EQ(j["reports"][0]["context"]["unique_words"]["mean"], 4.0);
  std::stringstream csv;
  write_hist_csv(csv, std::vector<MetricsReport>{r});
  EXPECT_EQ(csv.str(), "method,k,cluster_id,metric,value\nVN,2,0,unique_words,3\nVN,2,1,unique_words,5\n");
}

TEST(Report, EvaluateCombinesEverything) {
  ClusterFile f;
  f.vectors = points({{1, 0}, {0.9, 0.1}, {0, 1}, {0.1, 0.9}});
  f.assignment = labelled({0, 0, 1, 1}, 2);
  f.assignment.method_tag = "VN";
  std::map<std::string, std::vector<SummaryPhrase>> s{{"t0", {phrase("get point", {"VERB", "NOUN"})}},
                                                      {"t2", {phrase("signup bonus", {"NOUN", "NOUN"})}}};
  const auto r = evaluate(f, s);
  EXPECT_EQ(r.method_tag, "VN");
  EXPECT_EQ(r.n_threads, 4u);
  EXPECT_GT(r.silhouette, 0.5);
  EXPECT_EQ(r.context.ao_pairs, (std::vector<double>{1, 0}));
  EXPECT_EQ(r.context.noun_chunks, (std::vector<double>{0, 1}));
}

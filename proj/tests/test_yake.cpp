#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support/fixtures.hpp"

using namespace intent_miner;

namespace {

std::string fixture_text() { return im_test::read_file(im_test::source_path("tests/data/yake_fixture.txt")); }

// Lowercased word blocks of the text, joined by single spaces.
std::vector<std::string> lowered_blocks(const std::string& t) {
  std::vector<std::string> out;
  for (const auto& s : text::segment(t))
    for (const auto& b : s) out.push_back(" " + text::to_lower(text::join(b)) + " ");
  return out;
}

}  // namespace

TEST(Yake, EmptyText) {
  EXPECT_TRUE(yake_extract("").empty());
  EXPECT_TRUE(yake_extract("  ...  ").empty());
}

TEST(Yake, RepeatedWordKeepsAtMostOne) {
  YakeConfig cfg;
  cfg.ngram_sizes = {2};
  EXPECT_LE(yake_extract("card card card card card.", cfg).size(), 1u);
  cfg.ngram_sizes = {3};
  EXPECT_LE(yake_extract("points points points points. points points.", cfg).size(), 1u);
  cfg.ngram_sizes = {1};
  EXPECT_LE(yake_extract("Zelle zelle ZELLE zelle", cfg).size(), 1u);
}

TEST(Yake, MatchesFrozenReference) {
  const auto ref = nlohmann::json::parse(im_test::read_file(im_test::source_path("tests/data/yake_reference_top10.json")));
  std::ifstream sw(im_test::source_path("data/stopwords_en.txt"));
  YakeConfig cfg;
  cfg.ngram_sizes = ref["ngrams"].get<std::set<int>>();
  cfg.top_k = ref["top_k"].get<std::size_t>();
  cfg.dedup_threshold = ref["dedup"].get<double>();
  const auto got = yake_extract(fixture_text(), cfg, load_stopwords(sw));
  const auto& want = ref["keywords"];
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].text, want[i]["text"].get<std::string>()) << i;
    EXPECT_NEAR(got[i].score, want[i]["score"].get<double>(), 1e-6) << i;
  }
}

TEST(Yake, OutputInvariantsOnFixture) {
  const auto text = fixture_text();
  const auto blocks = lowered_blocks(text);
  for (std::size_t top_k : {1u, 5u, 20u}) {
    for (double dedup : {0.5, 0.9, 1.0}) {
      YakeConfig cfg;
      cfg.top_k = top_k;
      cfg.dedup_threshold = dedup;
      const auto kws = yake_extract(text, cfg);
      EXPECT_LE(kws.size(), top_k);
      EXPECT_FALSE(kws.empty());
      for (std::size_t i = 0; i < kws.size(); ++i) {
        EXPECT_GT(kws[i].score, 0.0);
        if (i > 0) {
          EXPECT_LE(kws[i - 1].score, kws[i].score);
        }
        const auto n = text::split(kws[i].text, ' ').size();
        EXPECT_TRUE(cfg.ngram_sizes.contains(static_cast<int>(n)));
        const bool contiguous = std::any_of(blocks.begin(), blocks.end(), [&](const std::string& b) {
          return b.find(" " + kws[i].text + " ") != std::string::npos;
        });
        EXPECT_TRUE(contiguous) << kws[i].text;
        for (std::size_t j = 0; j < i; ++j) EXPECT_LE(text::edit_similarity(kws[i].text, kws[j].text), dedup);
      }
    }
  }
}

TEST(Yake, StopwordsNeverAtEdges) {
  const auto sw = bundled_stopwords();
  YakeConfig cfg;
  cfg.top_k = 50;
  for (const auto& kw : yake_extract(fixture_text(), cfg)) {
    const auto words = text::split(kw.text, ' ');
    EXPECT_FALSE(sw.contains(words.front())) << kw.text;
    EXPECT_FALSE(sw.contains(words.back())) << kw.text;
  }
}

TEST(Yake, DigitsExcluded) {
  YakeConfig cfg;
  cfg.top_k = 50;
  cfg.ngram_sizes = {1, 2};
  for (const auto& kw : yake_extract("Paid 500 dollars for the 2024 premium card. Premium card fees hurt.", cfg))
    EXPECT_EQ(kw.text.find_first_of("0123456789"), std::string::npos) << kw.text;
}

TEST(Yake, ConfigValidation) {
  YakeConfig cfg;
  cfg.ngram_sizes = {};
  EXPECT_THROW(yake_extract("x y", cfg), Error);
  cfg = {};
  cfg.ngram_sizes = {0};
  EXPECT_THROW(yake_extract("x y", cfg), Error);
  cfg = {};
  cfg.dedup_threshold = 0.0;
  EXPECT_THROW(yake_extract("x y", cfg), Error);
  cfg = {};
  cfg.top_k = 0;
  EXPECT_THROW(yake_extract("x y", cfg), Error);
}

TEST(Yake, Deterministic) {
  const auto t = fixture_text();
  EXPECT_EQ(yake_extract(t), yake_extract(t));
}

TEST(Stopwords, EmbeddedListMatchesDataFile) {
  std::ifstream in(im_test::source_path("data/stopwords_en.txt"));
  ASSERT_TRUE(in);
  EXPECT_EQ(load_stopwords(in), bundled_stopwords());
}

TEST(Stopwords, LoadSkipsCommentsAndLowercases) {
  std::stringstream s("# header\nThe\n\nAND\r\n");
  EXPECT_EQ(load_stopwords(s), (StopwordSet{"the", "and"}));
}

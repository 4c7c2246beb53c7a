#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace intent_miner;

TEST(Toml, TablesScalarsAndArrays) {
  const auto t = parse_toml(R"(
# comment
top = "x"   # trailing comment
[input]
threads = "a \"b\"\tc"
[cluster]
k = [10, 20,]
ratio = 0.25
big = 1_000
flag = true
dotted.key = -3
empty = []
)");
  EXPECT_EQ(t.at("top").s, "x");
  EXPECT_EQ(t.at("input.threads").s, "a \"b\"\tc");
  const auto& k = t.at("cluster.k");
  ASSERT_EQ(k.kind, TomlValue::Kind::array);
  ASSERT_EQ(k.items.size(), 2u);
  EXPECT_EQ(k.items[1].i, 20);
  EXPECT_DOUBLE_EQ(t.at("cluster.ratio").d, 0.25);
  EXPECT_EQ(t.at("cluster.big").i, 1000);
  EXPECT_TRUE(t.at("cluster.flag").b);
  EXPECT_EQ(t.at("cluster.dotted.key").i, -3);
  EXPECT_TRUE(t.at("cluster.empty").items.empty());
}

TEST(Toml, SyntaxErrorsNameTheLine) {
  auto fails_at = [](const std::string& text, const std::string& line) {
    try {
      parse_toml(text);
    } catch (const Error& e) {
      return std::string(e.what()).find("line " + line) != std::string::npos;
    }
    return false;
  };
  EXPECT_TRUE(fails_at("a = 1\nb = \"open\n", "2"));
  EXPECT_TRUE(fails_at("a = 1\na = 2\n", "2"));
  EXPECT_TRUE(fails_at("[t\n", "1"));
  EXPECT_TRUE(fails_at("x = [1 2]\n", "1"));
  EXPECT_TRUE(fails_at("x = 12abc\n", "1"));
  EXPECT_TRUE(fails_at("x = 1 2\n", "1"));
  EXPECT_TRUE(fails_at("= 3\n", "1"));
  EXPECT_TRUE(fails_at("[[arr]]\n", "1"));
  EXPECT_TRUE(fails_at("s = \"\\q\"\n", "1"));
}

TEST(RunConfig, MapsKeysAndResolvesPaths) {
  const auto t = parse_toml(R"(
[input]
threads = "threads.jsonl"
conllu = "/abs/anns.conllu"
[output]
dir = "out"
[cluster]
k = 7
methods = ["VN", "YAKE"]
linkage = "complete"
vectors = "binary"
[yake]
ngrams = [1, 2]
top_k = 5
dedup = 0.8
[sentiment]
match_window = 12
[metrics]
silhouette_distance = "euclidean"
[run]
jobs = 3
)");
  const auto c = run_config_from_toml(t, "/base/dir");
  EXPECT_EQ(c.threads, "/base/dir/threads.jsonl");
  EXPECT_EQ(c.conllu, "/abs/anns.conllu");
  EXPECT_EQ(c.out_dir, "/base/dir/out");
  EXPECT_EQ(c.k, std::vector<std::size_t>{7});
  EXPECT_EQ(c.methods, (std::vector<std::string>{"VN", "YAKE"}));
  EXPECT_EQ(c.linkage, Linkage::complete);
  EXPECT_EQ(c.scheme, VectorScheme::binary);
  EXPECT_EQ(c.yake.ngram_sizes, (std::set<int>{1, 2}));
  EXPECT_EQ(c.yake.top_k, 5u);
  EXPECT_DOUBLE_EQ(c.yake.dedup_threshold, 0.8);
  EXPECT_EQ(c.match_window, 12u);
  EXPECT_EQ(c.silhouette_distance, Distance::euclidean);
  EXPECT_EQ(c.jobs, 3u);
}

TEST(RunConfig, RejectsBadValues) {
  EXPECT_THROW(run_config_from_toml(parse_toml("[cluster]\nkk = 3\n")), Error);
  EXPECT_THROW(run_config_from_toml(parse_toml("[cluster]\nk = \"3\"\n")), Error);
  EXPECT_THROW(run_config_from_toml(parse_toml("[cluster]\nk = -3\n")), Error);
  EXPECT_THROW(run_config_from_toml(parse_toml("[cluster]\nlinkage = \"ward\"\n")), Error);
  EXPECT_THROW(run_config_from_toml(parse_toml("[cluster]\nmethods = \"VN\"\n")), Error);
  EXPECT_THROW(run_config_from_toml(parse_toml("[metrics]\nsilhouette_distance = \"l1\"\n")), Error);
}

TEST(RunConfig, ValidateChecksPathsAndMethods) {
  RunConfig c;
  EXPECT_THROW(c.validate(), Error);  // no threads path
  c.threads = im_test::source_path("data/demo/threads.jsonl");
  c.conllu = im_test::source_path("data/demo/annotations.conllu");
  EXPECT_NO_THROW(c.validate());
  c.methods = {"VN", "BOGUS"};
  EXPECT_THROW(c.validate(), Error);
  c.methods = {"VN"};
  c.lexicon = "/no/such/file.tsv";
  EXPECT_THROW(c.validate(), Error);
}

TEST(RunConfig, DemoConfigLoads) {
  const auto c = load_run_config(im_test::source_path("data/demo/run.toml"));
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.k, std::vector<std::size_t>{3});
  EXPECT_EQ(c.methods, (std::vector<std::string>{"VN", "YAKE"}));
}

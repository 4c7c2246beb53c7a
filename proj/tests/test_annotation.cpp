#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support/fixtures.hpp"

using namespace intent_miner;
using im_test::tok;

namespace {

const char* kZelle =
    "# comment_id = c4\n"
    "# text = Can you use Zelle through the account\n"
    "1\tCan\tcan\tAUX\t_\t_\t3\taux\t_\t_\n"
    "2\tyou\tyou\tPRON\t_\t_\t3\tnsubj\t_\t_\n"
    "3\tuse\tuse\tVERB\t_\t_\t0\tROOT\t_\t_\n"
    "4\tZelle\tZelle\tPROPN\t_\t_\t3\tobj\t_\t_\n"
    "5\tthrough\tthrough\tADP\t_\t_\t3\tprep\t_\t_\n"
    "6\tthe\tthe\tDET\t_\t_\t7\tdet\t_\t_\n"
    "7\taccount\taccount\tNOUN\t_\t_\t5\tpobj\t_\t_\n"
    "\n";

ConlluResult parse(const std::string& s) {
  std::stringstream in(s);
  return parse_conllu(in);
}

Corpus corpus_with(const std::vector<std::string>& comment_ids) {
  Thread t;
  t.post.id = "p";
  for (const auto& id : comment_ids) {
    Comment c;
    c.id = id;
    c.post_id = "p";
    t.comments.push_back(c);
  }
  return {t};
}

}  // namespace

TEST(Conllu, EmptyStream) {
  const auto r = parse("");
  EXPECT_TRUE(r.comments.empty());
  EXPECT_TRUE(r.rejected.empty());
}

TEST(Conllu, ZelleSentenceFields) {
  const auto r = parse(kZelle);
  ASSERT_EQ(r.comments.size(), 1u);
  EXPECT_TRUE(r.rejected.empty());
  const auto& c = r.comments[0];
  EXPECT_EQ(c.comment_id, "c4");
  ASSERT_EQ(c.sentences.size(), 1u);
  const auto& s = c.sentences[0];
  ASSERT_EQ(s.size(), 7u);
  EXPECT_EQ(s[2], tok(3, "use", "VERB", 0, "ROOT"));
  EXPECT_EQ(s[3].surface, "Zelle");
  EXPECT_EQ(s[3].lemma, "zelle");
  EXPECT_EQ(s[3].upos, "PROPN");
  EXPECT_EQ(s[3].head, 3);
  EXPECT_EQ(s[3].deprel, "obj");
}

TEST(Conllu, HeadOutOfRangeRejectsSentence) {
  const std::string bad =
      "# comment_id = c1\n"
      "1\ta\ta\tDET\t_\t_\t2\tdet\t_\t_\n"
      "2\tb\tb\tNOUN\t_\t_\t0\tROOT\t_\t_\n"
      "\n"
      "# comment_id = c2\n"
      "1\ta\ta\tDET\t_\t_\t2\tdet\t_\t_\n"
      "2\tb\tb\tNOUN\t_\t_\t0\tROOT\t_\t_\n"
      "3\tc\tc\tNOUN\t_\t_\t9\tdobj\t_\t_\n"
      "4\td\td\tNOUN\t_\t_\t2\tdobj\t_\t_\n"
      "5\te\te\tNOUN\t_\t_\t2\tdobj\t_\t_\n"
      "\n";
  const auto r = parse(bad);
  ASSERT_EQ(r.rejected.size(), 1u);
  EXPECT_EQ(r.rejected[0].sentence_ordinal, 2u);
  EXPECT_NE(r.rejected[0].reason.find("out of range"), std::string::npos);
  ASSERT_EQ(r.comments.size(), 1u);
  EXPECT_EQ(r.comments[0].comment_id, "c1");
}

TEST(Conllu, StructuralRejections) {
  auto block = [](const std::string& rows) { return "# comment_id = x\n" + rows + "\n"; };
  EXPECT_EQ(parse(block("1\ta\ta\tX\t_\t_\t0\tROOT\t_\t_\n2\tb\tb\tX\t_\t_\t0\tROOT\t_\t_\n")).rejected.size(), 1u);
  EXPECT_EQ(parse(block("1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\n2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n")).rejected.size(), 1u);
  EXPECT_EQ(parse(block("1\ta\ta\tX\t_\t_\t1\tdep\t_\t_\n")).rejected.size(), 1u);
  EXPECT_EQ(parse(block("1\ta\ta\tX\t_\t_\n")).rejected.size(), 1u);
  EXPECT_EQ(parse("1\ta\ta\tX\t_\t_\t0\tROOT\t_\t_\n\n").rejected.size(), 1u);  // no comment id
}

TEST(Conllu, MultiwordRangesSkipped) {
  const auto r = parse(
      "# comment_id = m\n"
      "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_\n"
      "2\tn't\tnot\tPART\t_\t_\t3\tneg\t_\t_\n"
      "3\tgo\tgo\tVERB\t_\t_\t0\tROOT\t_\t_\n"
      "\n");
  ASSERT_EQ(r.comments.size(), 1u);
  EXPECT_EQ(r.comments[0].sentences[0].size(), 3u);
}

TEST(Conllu, SentencesGroupByComment) {
  const auto r = parse(std::string(kZelle) + kZelle);
  ASSERT_EQ(r.comments.size(), 1u);
  EXPECT_EQ(r.comments[0].sentences.size(), 2u);
}

TEST(Conllu, WriteParseRoundTripOnRandomTrees) {
  std::mt19937_64 rng(5);
  std::vector<AnnotatedComment> comments;
  for (int c = 0; c < 30; ++c) {
    AnnotatedComment ac{"c" + std::to_string(c), {}};
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int s = 0; s < n; ++s) ac.sentences.push_back(im_test::random_sentence(rng));
    comments.push_back(ac);
  }
  std::stringstream out;
  write_conllu(out, comments);
  const auto r = parse(out.str());
  EXPECT_TRUE(r.rejected.empty());
  EXPECT_EQ(r.comments, comments);
}

TEST(Conllu, Fig1FixtureParsesCleanly) {
  const auto r = read_conllu_file(im_test::source_path("tests/data/fig1_thread.conllu"));
  EXPECT_TRUE(r.rejected.empty());
  EXPECT_EQ(r.comments.size(), 6u);
}

TEST(Align, FullCoverage) {
  const auto anns = parse(std::string(kZelle)).comments;
  const auto a = align(corpus_with({"c4"}), anns);
  EXPECT_DOUBLE_EQ(a.coverage, 1.0);
  EXPECT_TRUE(a.unannotated_comment_ids.empty());
}

TEST(Align, ThreeOfFour) {
  std::vector<AnnotatedComment> anns;
  for (const char* id : {"a", "b", "c"}) anns.push_back({id, {}});
  const auto a = align(corpus_with({"a", "b", "c", "d"}), anns);
  EXPECT_DOUBLE_EQ(a.coverage, 0.75);
  EXPECT_EQ(a.unannotated_comment_ids, std::vector<std::string>{"d"});
}

TEST(Align, EmptyAnnotations) {
  const auto a = align(corpus_with({"a", "b"}), {});
  EXPECT_DOUBLE_EQ(a.coverage, 0.0);
  EXPECT_TRUE(extract_corpus(a)[0].pairs.empty());
}

TEST(Align, UnknownIdWarns) {
  const auto a = align(corpus_with({"a"}), {{"a", {}}, {"zz", {}}});
  ASSERT_EQ(a.warnings.size(), 1u);
  EXPECT_NE(a.warnings[0].find("zz"), std::string::npos);
  EXPECT_EQ(condensed_align_warnings(a.warnings),
            std::vector<std::string>{"dropped annotations for 1 unknown comment ids"});
}

TEST(UposTable, MajorityTagAndNounDefault) {
  AnnotatedComment c{"x", {{tok(1, "run", "VERB", 0, "ROOT")}, {tok(1, "run", "NOUN", 0, "ROOT")},
                           {tok(1, "run", "VERB", 0, "ROOT")}}};
  const UposTable t({c});
  EXPECT_EQ(t.lookup("Run"), "VERB");
  EXPECT_EQ(t.lookup("unseen"), "NOUN");
}

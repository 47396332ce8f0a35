#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "corpuslens/postag.hpp"

using namespace corpuslens;

namespace {

TaggedCorpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_conllu(in, "mem");
}

std::string row(int id, const std::string& form, const std::string& upos) {
  return std::to_string(id) + "\t" + form + "\t_\t" + upos + "\t_\t_\t_\t_\t_\t_\n";
}

std::vector<Upos> tags_of(const TaggedSentence& s) {
  std::vector<Upos> out;
  for (const auto& t : s) out.push_back(t.upos);
  return out;
}

TaggedCorpus from_tags(std::initializer_list<Upos> tags) {
  TaggedSentence s;
  for (auto t : tags) s.push_back({"w", t});
  return TaggedCorpus{{TaggedDocument{"d", {s}}}};
}

TokenizedCorpus corpus_of(std::initializer_list<const char*> texts) {
  Corpus c{"c", {}};
  int i = 0;
  for (const char* t : texts) c.documents.push_back({"d" + std::to_string(i++), "s", Source::other, t, {}});
  return tokenize_corpus(c);
}

}  // namespace

TEST(Upos, InventoryHas17TagsAndRoundTrips) {
  EXPECT_EQ(kUposNames.size(), 17u);
  for (auto name : kUposNames) {
    const auto t = parse_upos(name);
    ASSERT_TRUE(t.has_value()) << name;
    EXPECT_EQ(to_string(*t), name);
  }
  EXPECT_FALSE(parse_upos("XYZ").has_value());
  EXPECT_FALSE(parse_upos("noun").has_value());
}

TEST(Conllu, TwoSentences) {
  const auto tg = parse("# text = Der Hund bellt.\n" + row(1, "Der", "DET") + row(2, "Hund", "NOUN") +
                        row(3, "bellt", "VERB") + row(4, ".", "PUNCT") + "\n" + "# text = Lea lacht\n" +
                        row(1, "Lea", "PROPN") + row(2, "lacht", "VERB") + "\n");
  EXPECT_EQ(tg.sentence_count(), 2u);
  ASSERT_EQ(tg.documents.size(), 1u);
  EXPECT_EQ(tags_of(tg.documents[0].sentences[0]),
            (std::vector<Upos>{Upos::DET, Upos::NOUN, Upos::VERB, Upos::PUNCT}));
  EXPECT_EQ(tg.documents[0].sentences[1][0].surface, "Lea");
}

TEST(Conllu, UnknownTagNamesLine) {
  try {
    parse(row(1, "Der", "DET") + row(2, "Hund", "XYZ"));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("XYZ"), std::string::npos) << e.what();
  }
}

TEST(Conllu, WrongColumnCountIsAnError) {
  EXPECT_THROW(parse("1\tDer\t_\tDET\n"), Error);
}

TEST(Conllu, MultiwordRangesAndEmptyNodesSkipped) {
  const auto tg = parse(std::string("1-2\tzum\t_\t_\t_\t_\t_\t_\t_\t_\n") + row(1, "zu", "ADP") + row(2, "dem", "DET") +
                        "2.1\tx\t_\tX\t_\t_\t_\t_\t_\t_\n" + row(3, "Haus", "NOUN") + "\n");
  ASSERT_EQ(tg.sentence_count(), 1u);
  EXPECT_EQ(tg.documents[0].sentences[0].size(), 3u);
}

TEST(Conllu, NewdocSplitsDocuments) {
  const auto tg = parse("# newdoc id = a\n" + row(1, "Hund", "NOUN") + "\n# newdoc id = b\n" + row(1, "Ball", "NOUN") +
                        "\n" + row(1, "rollt", "VERB") + "\n");
  ASSERT_EQ(tg.documents.size(), 2u);
  EXPECT_EQ(tg.documents[0].id, "a");
  EXPECT_EQ(tg.documents[1].id, "b");
  EXPECT_EQ(tg.documents[1].sentences.size(), 2u);
}

TEST(ConlluProperty, SaveThenLoadIsIdentity) {
  std::mt19937 rng(17);
  const std::vector<std::string> forms = {"Der", "Hund", "bellt", ".", "Mädchen", "9.6", "Straßen-Bahn", "„"};
  for (int trial = 0; trial < 50; ++trial) {
    TaggedCorpus tg;
    const int docs = 1 + rng() % 4;
    for (int d = 0; d < docs; ++d) {
      TaggedDocument doc{"doc" + std::to_string(d), {}};
      const int sents = 1 + rng() % 4;
      for (int s = 0; s < sents; ++s) {
        TaggedSentence sent;
        const int n = 1 + rng() % 8;
        for (int k = 0; k < n; ++k) sent.push_back({forms[rng() % forms.size()], static_cast<Upos>(rng() % 17)});
        doc.sentences.push_back(sent);
      }
      tg.documents.push_back(doc);
    }
    std::stringstream buf;
    write_conllu(buf, tg);
    EXPECT_EQ(parse_conllu(buf, "rt"), tg);
  }
}

TEST(Baseline, TracesTheRules) {
  const Lexicon lex(std::map<std::string, Upos>{{"Der", Upos::DET}, {"bellt", Upos::VERB}});
  const auto tg = baseline_tag(corpus_of({"Der Hund bellt ."}), lex);
  ASSERT_EQ(tg.sentence_count(), 1u);
  EXPECT_EQ(tags_of(tg.documents[0].sentences[0]), (std::vector<Upos>{Upos::DET, Upos::NOUN, Upos::VERB, Upos::PUNCT}));
}

TEST(Baseline, EmptyCorpusAndFallbacks) {
  const Lexicon lex(std::map<std::string, Upos>{{"und", Upos::CCONJ}});
  EXPECT_TRUE(baseline_tag(TokenizedCorpus{"e", {}}, lex).documents.empty());
  const auto tg = baseline_tag(corpus_of({"blorft Und schnelligkeit 12 % ,"}), lex);
  const auto tags = tags_of(tg.documents[0].sentences[0]);
  EXPECT_EQ(tags[0], Upos::X);      // no rule applies
  EXPECT_EQ(tags[1], Upos::CCONJ);  // case-folded lookup beats capitalization
  EXPECT_EQ(tags[2], Upos::NOUN);   // -keit
  EXPECT_EQ(tags[3], Upos::NUM);
  EXPECT_EQ(tags[4], Upos::SYM);
  EXPECT_EQ(tags[5], Upos::PUNCT);
  EXPECT_EQ(baseline_tag(corpus_of({"blorft"}), lex), baseline_tag(corpus_of({"blorft"}), lex));
}

TEST(Lexicon, LoadsShippedFile) {
  const auto lex = load_lexicon(std::filesystem::path(CORPUSLENS_DATA_DIR) / "lexicon_de.tsv");
  EXPECT_EQ(lex.lookup("der"), Upos::DET);
  EXPECT_EQ(lex.lookup("Und"), Upos::CCONJ);
  EXPECT_FALSE(lex.lookup("Hund").has_value());
}

TEST(Distribution, Arithmetic) {
  const auto d = pos_distribution(from_tags({Upos::NOUN, Upos::VERB, Upos::NOUN, Upos::DET}));
  EXPECT_DOUBLE_EQ(d.percent.at(Upos::NOUN), 50.0);
  EXPECT_DOUBLE_EQ(d.percent.at(Upos::VERB), 25.0);
  EXPECT_DOUBLE_EQ(d.percent.at(Upos::DET), 25.0);
  EXPECT_DOUBLE_EQ(d.percent.at(Upos::ADJ), 0.0);
  EXPECT_EQ(d.n_tagged_tokens, 4u);
  EXPECT_EQ(d.percent.size(), 12u);
  EXPECT_FALSE(d.percent.count(Upos::PUNCT));
  EXPECT_FALSE(d.percent.count(Upos::PROPN));
}

TEST(Distribution, SingleNounAndPropnFolding) {
  EXPECT_DOUBLE_EQ(pos_distribution(from_tags({Upos::NOUN})).percent.at(Upos::NOUN), 100.0);
  const auto d = pos_distribution(from_tags({Upos::PROPN, Upos::VERB, Upos::PUNCT, Upos::X}));
  EXPECT_DOUBLE_EQ(d.percent.at(Upos::NOUN), 50.0);
  EXPECT_EQ(d.n_tagged_tokens, 2u);
  EXPECT_THROW(pos_distribution(from_tags({Upos::PUNCT, Upos::SYM})), Error);
}

TEST(DistributionProperty, SumsTo100AndIgnoresDocumentOrder) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    TaggedCorpus tg;
    for (int d = 0; d < 5; ++d) {
      TaggedSentence s;
      for (int k = 0; k < 20; ++k) s.push_back({"w", static_cast<Upos>(rng() % 17)});
      s.push_back({"Hund", Upos::NOUN});
      tg.documents.push_back({"d" + std::to_string(d), {s}});
    }
    const auto p = pos_distribution(tg);
    double sum = 0;
    for (const auto& [t, v] : p.percent) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 100.0, 0.01);
    auto shuffled = tg;
    std::shuffle(shuffled.documents.begin(), shuffled.documents.end(), rng);
    EXPECT_EQ(pos_distribution(shuffled), p);
  }
}

TEST(Diff, IdenticalAndExtreme) {
  const auto d = pos_distribution(from_tags({Upos::NOUN, Upos::VERB, Upos::ADJ}));
  for (const auto& r : pos_diff(d, d)) EXPECT_EQ(r.diff, 0.0);

  const auto a = pos_distribution(from_tags({Upos::NOUN}));
  const auto b = pos_distribution(from_tags({Upos::VERB}));
  const auto rows = pos_diff(a, b);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front().tag, Upos::NOUN);
  EXPECT_DOUBLE_EQ(rows.front().diff, -100.0);
  const auto verb = std::find_if(rows.begin(), rows.end(), [](const PosDiffRow& r) { return r.tag == Upos::VERB; });
  ASSERT_NE(verb, rows.end());
  EXPECT_DOUBLE_EQ(verb->diff, 100.0);
}

TEST(Diff, TagsetMismatchAndOrdering) {
  const auto a = pos_distribution(from_tags({Upos::NOUN, Upos::NOUN, Upos::VERB}));
  const auto b = pos_distribution(from_tags({Upos::VERB}), {Upos::PUNCT});
  EXPECT_THROW(pos_diff(a, b), Error);
  const auto rows = pos_diff(a, pos_distribution(from_tags({Upos::DET})));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i - 1].pct_a, rows[i].pct_a);
}

TEST(DiffProperty, DifferencesSumToZero) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    TaggedSentence sa;
    TaggedSentence sb;
    for (int k = 0; k < 50; ++k) sa.push_back({"w", static_cast<Upos>(rng() % 17)});
    for (int k = 0; k < 70; ++k) sb.push_back({"w", static_cast<Upos>(rng() % 17)});
    sa.push_back({"w", Upos::NOUN});
    sb.push_back({"w", Upos::NOUN});
    const auto rows = pos_diff(pos_distribution(TaggedCorpus{{{"a", {sa}}}}), pos_distribution(TaggedCorpus{{{"b", {sb}}}}));
    const double sum = std::accumulate(rows.begin(), rows.end(), 0.0, [](double s, const PosDiffRow& r) { return s + r.diff; });
    EXPECT_NEAR(sum, 0.0, 0.02);
  }
}

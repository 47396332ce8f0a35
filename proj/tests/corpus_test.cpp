#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <random>
#include <sstream>

#include "corpuslens/corpus.hpp"
#include "corpuslens/hash.hpp"
#include "corpuslens/random.hpp"
#include "corpuslens/utf8.hpp"

using namespace corpuslens;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto dir = std::filesystem::temp_directory_path() / "corpuslens_tests";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p, std::ios::binary) << contents;
  return p;
}

Corpus parse(const std::string& text, const std::string& name = "t") {
  std::istringstream in(text);
  return parse_corpus(in, name);
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Utf8, DecodesMultibyteAndRejectsMalformed) {
  EXPECT_EQ(utf8::decode("Mädchen").size(), 7u);
  EXPECT_EQ(utf8::decode("ß…").size(), 2u);
  EXPECT_TRUE(utf8::valid("Grüße"));
  EXPECT_FALSE(utf8::valid("\xC3"));          // truncated
  EXPECT_FALSE(utf8::valid("\xC0\xAF"));      // overlong '/'
  EXPECT_FALSE(utf8::valid("\xED\xA0\x80"));  // surrogate
  EXPECT_FALSE(utf8::valid("\xFF"));
  EXPECT_THROW(utf8::decode("a\xFF"), Error);
}

TEST(Utf8, EncodeRoundTrip) {
  const std::string s = "Über 9.6 Jahre, «Straße» ‹ok›";
  EXPECT_EQ(utf8::encode(utf8::decode(s)), s);
}

TEST(Utf8, ClassesAndFolding) {
  EXPECT_TRUE(utf8::is_letter(U'ä'));
  EXPECT_TRUE(utf8::is_letter(U'ß'));
  EXPECT_FALSE(utf8::is_letter(U'9'));
  EXPECT_TRUE(utf8::is_digit(U'9'));
  EXPECT_FALSE(utf8::is_letter(U'-'));
  EXPECT_EQ(utf8::fold("ÄPFEL Und"), "äpfel und");
  EXPECT_EQ(utf8::letter_count("Mädchen"), 7u);
  EXPECT_EQ(utf8::letter_count("9.6"), 0u);
  EXPECT_EQ(utf8::alnum_count("9.6"), 2u);
  EXPECT_EQ(utf8::letter_count("Staubsauger-Beutel"), 17u);
}

TEST(Hash, Fnv1aMatchesReferenceValues) {
  // reference values computed independently with a Python implementation
  EXPECT_EQ(fnv1a32(""), 0x811c9dc5u);
  EXPECT_EQ(fnv1a32("a"), 0xe40c292cu);
  EXPECT_EQ(fnv1a32("abc"), 0x1a47e90bu);
  EXPECT_EQ(fnv1a32("<Hund>"), 0x9b8f4880u);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("abc"), 0xe71fa2190541574bull);
}

TEST(Random, UniformIndexStaysInRangeAndIsSeeded) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = uniform_index(a, 7);
    EXPECT_LT(x, 7u);
    EXPECT_EQ(x, uniform_index(b, 7));
  }
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform_real(c, -0.5, 0.25);
    EXPECT_GE(u, -0.5);
    EXPECT_LT(u, 0.25);
  }
}

TEST(Corpus, TwoValidLinesGiveTwoDocumentsInOrder) {
  const auto c = parse(
      R"({"id":"d1","story":"Eis","text":"Lea lacht.","source":"child","meta":{"grade":"3"}})"
      "\n"
      R"({"id":"d2","story":"Dodo","text":"Dodo bellt!","source":"llm-fs"})"
      "\n");
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.documents[0].id, "d1");
  EXPECT_EQ(c.documents[0].story_id, "Eis");
  EXPECT_EQ(c.documents[0].source, Source::child);
  EXPECT_EQ(c.documents[0].meta.at("grade"), "3");
  EXPECT_EQ(c.documents[1].source, Source::llm_fs);
  EXPECT_NO_THROW(validate(c));
}

TEST(Corpus, DuplicateIdNamesTheLine) {
  const auto msg = error_of([] {
    parse(R"({"id":"a","story":"s","text":"x","source":"child"})"
          "\n"
          R"({"id":"b","story":"s","text":"y","source":"child"})"
          "\n"
          R"({"id":"a","story":"s","text":"z","source":"child"})"
          "\n");
  });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;
}

TEST(Corpus, MalformedAndInvalidLinesAreRejected) {
  EXPECT_NE(error_of([] { parse("{not json}\n"); }).find("line 1"), std::string::npos);
  EXPECT_THROW(parse(R"({"id":"a","story":"s","text":"   ","source":"child"})"), Error);
  EXPECT_THROW(parse(R"({"id":"a","story":"","text":"x","source":"child"})"), Error);
  EXPECT_THROW(parse(R"({"id":"a","story":"s","text":"x","source":"robot"})"), Error);
  EXPECT_THROW(parse(R"({"id":"a","story":"s","text":"x"})"), Error);
  EXPECT_THROW(parse(R"({"id":7,"story":"s","text":"x","source":"child"})"), Error);
  EXPECT_THROW(parse(R"(["a"])"), Error);
}

TEST(Corpus, BlankLinesAreSkippedAndLineNumbersStayPhysical) {
  const auto msg = error_of([] { parse("\n\n{\"id\":\"a\"}\n"); });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Corpus, LoadCorpusUsesStemAndReportsPath) {
  const auto p = temp_file("mini.jsonl", R"({"id":"a","story":"s","text":"x","source":"other"})"
                                         "\n");
  const auto c = load_corpus(p);
  EXPECT_EQ(c.name, "mini");
  EXPECT_THROW(load_corpus(p.parent_path() / "missing.jsonl"), Error);
  const auto bad = temp_file("bad.jsonl", "{\n");
  const auto msg = error_of([&] { load_corpus(bad); });
  EXPECT_NE(msg.find("bad.jsonl"), std::string::npos) << msg;
}

TEST(Corpus, SerializeThenLoadIsIdentity) {
  Corpus c{"rt", {}};
  std::mt19937 rng(5);
  const std::vector<std::string> texts = {"Lea lacht.", "Der \"Hund\" bellt\tlaut.\nNeue Zeile", "Grüße, ß & ü", "\\ slash"};
  for (int i = 0; i < 40; ++i) {
    Document d;
    d.id = "doc-" + std::to_string(i);
    d.story_id = i % 2 ? "Eis" : "Dodo";
    d.source = static_cast<Source>(i % 4);
    d.text = texts[rng() % texts.size()];
    if (i % 3 == 0) d.meta = {{"grade", std::to_string(i % 4 + 1)}, {"note", "ä"}};
    c.documents.push_back(d);
  }
  std::stringstream buf;
  write_manifest(buf, c);
  EXPECT_EQ(parse_corpus(buf, "rt"), c);

  const auto p = std::filesystem::temp_directory_path() / "corpuslens_tests" / "rt.jsonl";
  std::filesystem::create_directories(p.parent_path());
  save_corpus(p, c);
  EXPECT_EQ(load_corpus(p), c);
}

TEST(Corpus, ValidateCatchesConstructedViolations) {
  Corpus c{"x", {{"a", "s", Source::child, "t", {}}, {"a", "s", Source::child, "u", {}}}};
  EXPECT_THROW(validate(c), Error);
  c.documents[1].id = "b";
  EXPECT_NO_THROW(validate(c));
  c.name.clear();
  EXPECT_THROW(validate(c), Error);
}

TEST(Stopwords, ThreeLineFile) {
  std::istringstream in("und\nist\ner\n");
  EXPECT_EQ(parse_stopwords(in).size(), 3u);
}

TEST(Stopwords, BlankLinesAndCommentsSkipped) {
  std::istringstream in("# German\nund\n\n  ist  \n#er\n");
  const auto s = parse_stopwords(in);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains("ist"));
  EXPECT_FALSE(s.contains("er"));
}

TEST(Stopwords, InvalidUtf8IsAnError) {
  std::istringstream in("und\n\xFF\xFE\n");
  const auto msg = error_of([&] { parse_stopwords(in); });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(Stopwords, MembershipIsCaseInsensitive) {
  const WordSet s{"und", "Über"};
  for (const char* w : {"und", "Und", "UND"}) EXPECT_TRUE(s.contains(w)) << w;
  EXPECT_EQ(s.contains("über"), s.contains("ÜBER"));
  EXPECT_FALSE(s.contains("Hund"));
  EXPECT_THROW(WordSet{""}, Error);
}

TEST(Stopwords, ShippedGermanListHas232Entries) {
  // count of the non-comment lines of the shipped list, checked with wc
  const auto shipped = load_stopwords(std::filesystem::path(CORPUSLENS_DATA_DIR) / "stopwords_de.txt");
  EXPECT_EQ(shipped.size(), 232u);
  EXPECT_EQ(shipped, default_german_stopwords());
  EXPECT_TRUE(shipped.contains("Der"));
  EXPECT_TRUE(shipped.contains("daß"));
  EXPECT_FALSE(shipped.contains("Hund"));
}

TEST(Stopwords, DefaultNames) {
  const auto n = default_character_names();
  EXPECT_EQ(n.size(), 3u);
  EXPECT_TRUE(n.contains("lars"));
  EXPECT_TRUE(n.contains("Dodo"));
}

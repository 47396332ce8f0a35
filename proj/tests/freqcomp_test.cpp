#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "corpuslens/freqcomp.hpp"

using namespace corpuslens;

namespace {

TokenizedCorpus corpus_of(std::initializer_list<const char*> texts, const std::string& name = "c") {
  Corpus c{name, {}};
  int i = 0;
  for (const char* t : texts) c.documents.push_back({"d" + std::to_string(i++), "s", Source::other, t, {}});
  return tokenize_corpus(c);
}

FreqTable table(WordCounts counts, const std::string& name = "t") {
  FreqTable t{name, std::move(counts), 0};
  for (const auto& [w, c] : t.counts) t.total += c;
  return t;
}

/// Brute-force sums formula, evaluated in long double.
double textbook_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  const long double n = x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += (long double)x[i] * x[i];
    syy += (long double)y[i] * y[i];
    sxy += (long double)x[i] * y[i];
  }
  return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

}  // namespace

TEST(FrequencyTable, WordsOnlyAndContentOnly) {
  const auto tc = corpus_of({"Der Hund. Der Ball."});
  const auto w = frequency_table(tc, FreqFilter::words_only);
  EXPECT_EQ(w.counts, (WordCounts{{"Der", 2}, {"Hund", 1}, {"Ball", 1}}));
  EXPECT_EQ(w.total, 4u);
  const auto c = frequency_table(tc, FreqFilter::content_only, WordSet{"der"});
  EXPECT_EQ(c.counts, (WordCounts{{"Hund", 1}, {"Ball", 1}}));
  EXPECT_EQ(c.total, 2u);
  EXPECT_THROW(frequency_table(TokenizedCorpus{"e", {}}, FreqFilter::words_only), Error);
}

TEST(LogSmoothed, UnionOfSmallTables) {
  // ln 3 and ln 2 from Python's math.log
  constexpr double ln3 = 1.0986122886681098;
  constexpr double ln2 = 0.6931471805599453;
  const auto v = log_smoothed_vectors(table({{"a", 2}, {"b", 1}}), table({{"a", 1}, {"c", 1}}), VocabMode::union_vocab);
  EXPECT_EQ(v.vocab, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(v.a.size(), 3u);
  EXPECT_NEAR(v.a[0], ln3, 1e-15);
  EXPECT_NEAR(v.a[1], ln2, 1e-15);
  EXPECT_EQ(v.a[2], 0.0);
  EXPECT_NEAR(v.b[0], ln2, 1e-15);
  EXPECT_EQ(v.b[1], 0.0);
  EXPECT_NEAR(v.b[2], ln2, 1e-15);
}

TEST(LogSmoothed, SharedModeAndIdentity) {
  const auto a = table({{"a", 2}, {"b", 1}});
  const auto s = log_smoothed_vectors(a, table({{"a", 1}, {"c", 1}}), VocabMode::shared_vocab);
  EXPECT_EQ(s.vocab, (std::vector<std::string>{"a"}));
  const auto id = log_smoothed_vectors(a, a, VocabMode::union_vocab);
  EXPECT_EQ(id.a, id.b);
  EXPECT_THROW(log_smoothed_vectors(a, table({{"z", 1}}), VocabMode::shared_vocab), Error);
  EXPECT_THROW(log_smoothed_vectors(a, table({}), VocabMode::union_vocab), Error);
}

TEST(LogSmoothedProperty, NonNegativeAndZeroOnlyWhenAbsent) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    WordCounts ca;
    WordCounts cb;
    for (int i = 0; i < 30; ++i) {
      const std::string w(1, char('a' + rng() % 26));
      if (rng() % 2) ++ca[w]; else ++cb[w];
    }
    if (ca.empty() || cb.empty()) continue;
    const auto v = log_smoothed_vectors(table(ca), table(cb), VocabMode::union_vocab);
    for (std::size_t i = 0; i < v.vocab.size(); ++i) {
      EXPECT_GE(v.a[i], 0.0);
      EXPECT_GE(v.b[i], 0.0);
      EXPECT_EQ(v.a[i] == 0.0, !ca.count(v.vocab[i]));
      EXPECT_EQ(v.b[i] == 0.0, !cb.count(v.vocab[i]));
    }
  }
}

TEST(Pearson, IdentityAndAntiSymmetry) {
  EXPECT_DOUBLE_EQ(pearson_r({1, 2, 3}, {1, 2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(pearson_r({1, 2, 3}, {3, 2, 1}), -1.0);
}

TEST(Pearson, Errors) {
  EXPECT_THROW(pearson_r({1, 2, 3}, {1, 2}), Error);
  EXPECT_THROW(pearson_r({1}, {1}), Error);
  EXPECT_THROW(pearson_r({2, 2, 2}, {1, 2, 3}), Error);
  EXPECT_THROW(pearson_r({1, 2, 3}, {0, 0, 0}), Error);
}

TEST(Pearson, MatchesTextbookFormulaOnRandomPairs) {
  std::mt19937_64 rng(100);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 200;
    std::vector<double> x(n);
    std::vector<double> y(n);
    const double rho = (trial % 21 - 10) / 10.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = g(rng);
      y[i] = rho * x[i] + std::sqrt(1 - rho * rho) * g(rng);
    }
    if (std::abs(rho) == 1.0) y[0] += 0.5;
    EXPECT_NEAR(pearson_r(x, y), textbook_pearson(x, y), 1e-12);
  }
}

TEST(PearsonProperty, AffineInvariance) {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(25);
    std::vector<double> y(25);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = u(rng);
      y[i] = x[i] * 0.3 + u(rng);
    }
    double alpha = u(rng);
    if (std::abs(alpha) < 0.1) alpha = 0.5;
    const double beta = u(rng) * 10;
    std::vector<double> ax(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ax[i] = alpha * x[i] + beta;
    const double r = pearson_r(x, y);
    EXPECT_NEAR(pearson_r(ax, y), (alpha > 0 ? 1 : -1) * r, 1e-12);
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(PearsonProperty, LogBaseDoesNotMatter) {
  const auto v = log_smoothed_vectors(table({{"a", 9}, {"b", 1}, {"c", 4}, {"d", 2}}),
                                      table({{"a", 3}, {"c", 7}, {"e", 1}}), VocabMode::union_vocab);
  std::vector<double> a10(v.a.size());
  for (std::size_t i = 0; i < v.a.size(); ++i) a10[i] = v.a[i] / std::log(10.0);
  EXPECT_NEAR(pearson_r(a10, v.b), pearson_r(v.a, v.b), 1e-12);
}

TEST(CompareFrequencies, CorpusWithItselfIsOne) {
  const auto tc = corpus_of({"Der Hund bellt. Lea lacht und der Hund springt.", "Dodo rennt in den Garten."});
  const auto c = compare_frequencies(tc, tc, WordSet{"der", "und", "in", "den"}, WordSet{"Lea", "Dodo"});
  EXPECT_DOUBLE_EQ(c.r_all, 1.0);
  EXPECT_DOUBLE_EQ(c.r_shared, 1.0);
  EXPECT_DOUBLE_EQ(c.r_no_function_words, 1.0);
  EXPECT_EQ(c.n_all, c.n_shared);
}

TEST(CompareFrequencies, VariantsUseTheirVocabularies) {
  const auto a = corpus_of({"der Hund der Hund der Ball und Lea"});
  const auto b = corpus_of({"der der Hund die Katze die Katze und Lars"});
  const auto c = compare_frequencies(a, b, WordSet{"der", "die", "und"}, WordSet{"Lea", "Lars"});
  EXPECT_EQ(c.n_all, 8u);  // Ball Hund Katze Lars Lea der die und
  EXPECT_EQ(c.n_shared, 3u);
  EXPECT_EQ(c.n_no_function_words, 3u);  // Ball Hund Katze
  for (double r : {c.r_all, c.r_shared, c.r_no_function_words}) {
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(Scatter, HeaderAndRows) {
  std::ostringstream out;
  write_scatter_tsv(out, log_smoothed_vectors(table({{"a", 1}}), table({{"a", 1}, {"b", 2}}), VocabMode::union_vocab));
  const auto s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "word\tlog_a\tlog_b");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 3);
}

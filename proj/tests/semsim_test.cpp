#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "corpuslens/semsim.hpp"

using namespace corpuslens;

namespace {

WordVectors random_space(const std::vector<std::string>& words, std::size_t dim, std::uint64_t seed,
                         std::vector<std::uint64_t> counts = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<float> data(words.size() * dim);
  for (auto& x : data) x = g(rng);
  return WordVectors(words, dim, std::move(data), std::move(counts));
}

std::vector<std::string> word_list(std::size_t n) {
  std::vector<std::string> w;
  for (std::size_t i = 0; i < n; ++i) w.push_back("w" + std::to_string(1000 + i));
  return w;
}

/// Random orthogonal matrix: Gram-Schmidt on a Gaussian matrix.
std::vector<std::vector<double>> random_rotation(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> q(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (auto& x : q[i]) x = g(rng);
    for (std::size_t j = 0; j < i; ++j) {
      const double p = std::inner_product(q[i].begin(), q[i].end(), q[j].begin(), 0.0);
      for (std::size_t k = 0; k < d; ++k) q[i][k] -= p * q[j][k];
    }
    const double n = std::sqrt(std::inner_product(q[i].begin(), q[i].end(), q[i].begin(), 0.0));
    for (auto& x : q[i]) x /= n;
  }
  return q;
}

SimilarityProfile profile(std::vector<std::string> words, std::vector<double> sims) {
  SimilarityProfile p;
  p.words = std::move(words);
  for (std::uint32_t i = 0; i < p.words.size(); ++i)
    for (std::uint32_t j = i + 1; j < p.words.size(); ++j) p.pairs.emplace_back(i, j);
  p.sims = std::move(sims);
  return p;
}

}  // namespace

TEST(SharedVocabulary, IntersectionAndFilters) {
  const auto a = random_space({"a", "b", "c"}, 2, 1);
  const auto b = random_space({"d", "c", "b"}, 2, 2);
  EXPECT_EQ(shared_vocabulary(a, b), (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(shared_vocabulary(a, a), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(shared_vocabulary(a, b, WordSet{"B"}), (std::vector<std::string>{"c"}));
  EXPECT_THROW(shared_vocabulary(a, random_space({"x"}, 2, 3)), Error);
}

TEST(SharedVocabulary, CaseSensitiveWithCountThreshold) {
  const auto a = random_space({"Hund", "Ball", "Lea"}, 2, 1, {5, 1, 3});
  const auto b = random_space({"hund", "Ball", "Lea", "Hund"}, 2, 2, {4, 2, 2, 2});
  EXPECT_EQ(shared_vocabulary(a, b, {}, WordSet{"Lea"}, 1), (std::vector<std::string>{"Ball", "Hund"}));
  EXPECT_EQ(shared_vocabulary(a, b, {}, WordSet{"Lea"}, 2), (std::vector<std::string>{"Hund"}));
}

TEST(Cosine, BasicCases) {
  EXPECT_DOUBLE_EQ(cosine({1, 0}, {1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(cosine({1, 0}, {0, 1}), 0.0);
  EXPECT_NEAR(cosine({1, 1}, {2, 2}), 1.0, 1e-15);
  EXPECT_THROW(cosine({0, 0}, {1, 2}), Error);
  EXPECT_THROW(cosine({1, 0, 0}, {1, 2}), Error);
}

TEST(Profile, PairCountsAndOrder) {
  const auto space = random_space({"c", "a", "b"}, 4, 9);
  const auto p = similarity_profile(space, {"c", "a", "b"}, "m");
  EXPECT_EQ(p.words, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(p.sims.size(), 3u);
  EXPECT_EQ(p.pairs, (std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_NEAR(p.sims[1], cosine(space.vector(*space.find("a")), space.vector(*space.find("c"))), 1e-12);
  EXPECT_EQ(p.source, "m");
  EXPECT_EQ(similarity_profile(space, {"a", "b", "c"}), similarity_profile(space, {"a", "b", "c"}));
}

TEST(Profile, Errors) {
  const auto space = random_space({"a", "b"}, 3, 1);
  EXPECT_THROW(similarity_profile(space, {"a", "a"}), Error);
  EXPECT_THROW(similarity_profile(space, {"a"}), Error);
  EXPECT_THROW(similarity_profile(space, {"a", "zzz"}), Error);
  const WordVectors zero({"a", "b"}, 2, {0, 0, 1, 1});
  try {
    similarity_profile(zero, {"a", "b"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
}

TEST(ProfileProperty, SizeAndRangeForManyWords) {
  const auto words = word_list(60);
  const auto p = similarity_profile(random_space(words, 7, 4), words, "x", 4);
  EXPECT_EQ(p.sims.size(), 60u * 59u / 2u);
  for (double s : p.sims) {
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
  EXPECT_EQ(p, similarity_profile(random_space(words, 7, 4), words, "x", 1));
}

TEST(ProfileProperty, RotationInvariant) {
  constexpr std::size_t d = 12;
  const auto words = word_list(40);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto space = random_space(words, d, 100 + seed);
    const auto q = random_rotation(d, 200 + seed);
    std::vector<float> rotated(space.data().size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto v = space.vector(i);
      for (std::size_t r = 0; r < d; ++r) {
        double s = 0;
        for (std::size_t k = 0; k < d; ++k) s += q[r][k] * v[k];
        rotated[i * d + r] = static_cast<float>(s);
      }
    }
    const auto a = similarity_profile(space, words);
    const auto b = similarity_profile(WordVectors(words, d, rotated), words);
    ASSERT_TRUE(a.same_pairs(b));
    for (std::size_t k = 0; k < a.sims.size(); ++k) EXPECT_NEAR(a.sims[k], b.sims[k], 1e-6);
  }
}

TEST(SecondOrder, IdentitySymmetryAndMismatch) {
  const auto words = word_list(20);
  const auto a = similarity_profile(random_space(words, 5, 1), words);
  const auto b = similarity_profile(random_space(words, 5, 2), words);
  EXPECT_DOUBLE_EQ(second_order_r(a, a), 1.0);
  EXPECT_DOUBLE_EQ(second_order_r(a, b), second_order_r(b, a));
  const auto other = similarity_profile(random_space(word_list(21), 5, 2), word_list(21));
  EXPECT_THROW(second_order_r(a, other), Error);
  const auto flat = profile({"a", "b", "c"}, {0.5, 0.5, 0.5});
  EXPECT_THROW(second_order_r(flat, profile({"a", "b", "c"}, {0.1, 0.2, 0.3})), Error);
}

TEST(SecondOrderProperty, CommonPermutationOfPairsDoesNotMatter) {
  std::mt19937 rng(5);
  const auto words = word_list(15);
  auto a = similarity_profile(random_space(words, 6, 10), words);
  auto b = similarity_profile(random_space(words, 6, 11), words);
  const double r = second_order_r(a, b);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> perm(a.sims.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto pa = a;
    auto pb = b;
    for (std::size_t k = 0; k < perm.size(); ++k) {
      pa.pairs[k] = a.pairs[perm[k]];
      pa.sims[k] = a.sims[perm[k]];
      pb.pairs[k] = b.pairs[perm[k]];
      pb.sims[k] = b.sims[perm[k]];
    }
    EXPECT_NEAR(second_order_r(pa, pb), r, 1e-12);
  }
}

TEST(Percentile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4, 5}, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(percentile({7}, 0.975), 7.0);
  EXPECT_DOUBLE_EQ(percentile({0, 10}, 0.025), 0.25);
  EXPECT_THROW(percentile({}, 0.5), Error);
}

TEST(Bootstrap, IdentityGivesOnes) {
  const auto words = word_list(10);
  const auto a = similarity_profile(random_space(words, 4, 1), words);
  const auto res = bootstrap_r(a, a, 60, 3);
  EXPECT_EQ(res.replicate_rs.size(), 60u);
  for (double r : res.replicate_rs) EXPECT_NEAR(r, 1.0, 1e-12);
  EXPECT_NEAR(res.ci_low, 1.0, 1e-12);
  EXPECT_NEAR(res.ci_high, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(res.point_r, 1.0);
  EXPECT_THROW(bootstrap_r(a, a, 0, 3), Error);
}

TEST(Bootstrap, DeterministicAndThreadIndependent) {
  const auto words = word_list(25);
  const auto a = similarity_profile(random_space(words, 4, 1), words);
  const auto b = similarity_profile(random_space(words, 4, 2), words);
  const auto r1 = bootstrap_r(a, b, 200, 42, 1);
  EXPECT_EQ(r1, bootstrap_r(a, b, 200, 42, 1));
  EXPECT_EQ(r1, bootstrap_r(a, b, 200, 42, 7));
  EXPECT_NE(r1.replicate_rs, bootstrap_r(a, b, 200, 43, 1).replicate_rs);
  EXPECT_LE(r1.ci_low, r1.ci_high);
  const auto [lo, hi] = std::minmax_element(r1.replicate_rs.begin(), r1.replicate_rs.end());
  EXPECT_GE(r1.point_r, *lo);
  EXPECT_LE(r1.point_r, *hi);
}

TEST(Bootstrap, DegenerateResamplesAreRedrawn) {
  // two distinct values among three pairs: some resamples pick a single pair
  const auto a = profile({"a", "b", "c"}, {0.1, 0.9, 0.1});
  const auto b = profile({"a", "b", "c"}, {0.2, 0.8, 0.3});
  const auto res = bootstrap_r(a, b, 200, 1);
  EXPECT_GT(res.retries, 0u);
  for (double r : res.replicate_rs) EXPECT_TRUE(std::isfinite(r));
}

TEST(ProfileTsv, HeaderAndRows) {
  const auto words = word_list(4);
  const auto a = similarity_profile(random_space(words, 3, 1), words);
  std::ostringstream out;
  write_profile_tsv(out, a, a);
  const auto s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "word1\tword2\tsim_a\tsim_b");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 7);
}

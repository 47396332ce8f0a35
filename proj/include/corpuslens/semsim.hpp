#pragma once

// Second-order semantic comparison of two independently trained vector
// spaces. Each space is reduced to the cosine similarities between all pairs
// of a shared word list; the two similarity profiles are then correlated.
// Axes of the spaces never meet, so arbitrary rotations do not matter.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "corpuslens/corpus.hpp"
#include "corpuslens/embed.hpp"
#include "corpuslens/error.hpp"
#include "corpuslens/freqcomp.hpp"
#include "corpuslens/random.hpp"

namespace corpuslens {

/// Sorted case-sensitive intersection of both vocabularies, minus stopwords and
/// names. When both spaces carry counts, each word needs `min_count` in both.
inline std::vector<std::string> shared_vocabulary(const WordVectors& a, const WordVectors& b,
                                                  const WordSet& stops = {}, const WordSet& names = {},
                                                  std::size_t min_count = 1) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& w = a.words()[i];
    const auto j = b.find(w);
    if (!j) continue;
    if (stops.contains(w) || names.contains(w)) continue;
    if (a.has_counts() && a.count(i) < min_count) continue;
    if (b.has_counts() && b.count(*j) < min_count) continue;
    out.push_back(w);
  }
  if (out.empty()) throw Error("semsim", "the two vector spaces share no (content) words");
  std::sort(out.begin(), out.end());
  return out;
}

template <class T, class U>
double cosine(std::span<const T> u, std::span<const U> v) {
  if (u.size() != v.size()) throw Error("semsim", "cosine of vectors with different lengths");
  double uv = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += static_cast<double>(u[i]) * static_cast<double>(v[i]);
    uu += static_cast<double>(u[i]) * static_cast<double>(u[i]);
    vv += static_cast<double>(v[i]) * static_cast<double>(v[i]);
  }
  if (uu == 0.0 || vv == 0.0) throw Error("semsim", "cosine of a zero vector");
  return std::clamp(uv / std::sqrt(uu * vv), -1.0, 1.0);
}

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  return cosine(std::span<const double>(u), std::span<const double>(v));
}

/// Within-space cosine similarities over all unordered pairs of `words`, in
/// canonical order: words sorted, pairs (i, j) with i < j, i-major.
struct SimilarityProfile {
  std::vector<std::string> words;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<double> sims;
  std::string source;

  bool same_pairs(const SimilarityProfile& o) const { return words == o.words && pairs == o.pairs; }
  bool operator==(const SimilarityProfile&) const = default;
};

namespace detail {

inline std::vector<std::string> canonical_words(std::vector<std::string> words) {
  if (words.size() < 2) throw Error("semsim", "a similarity profile needs at least 2 words");
  std::sort(words.begin(), words.end());
  if (const auto dup = std::adjacent_find(words.begin(), words.end()); dup != words.end()) {
    throw Error("semsim", "duplicate word '" + *dup + "' in profile word list");
  }
  return words;
}

/// Builds the profile from unit vectors (row-major, n x dim).
inline SimilarityProfile profile_from_units(std::vector<std::string> words, const std::vector<double>& units,
                                            std::size_t dim, std::string source, std::size_t threads) {
  const std::size_t n = words.size();
  SimilarityProfile p;
  p.words = std::move(words);
  p.source = std::move(source);
  const std::size_t m = n * (n - 1) / 2;
  p.pairs.resize(m);
  p.sims.resize(m);
  const auto row_offset = [n](std::size_t i) { return i * n - i * (i + 1) / 2; };
  const auto fill_rows = [&](std::size_t first, std::size_t step) {
    for (std::size_t i = first; i < n; i += step) {
      std::size_t k = row_offset(i);
      const double* ui = units.data() + i * dim;
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        const double* uj = units.data() + j * dim;
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) s += ui[d] * uj[d];
        p.pairs[k] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
        p.sims[k] = std::clamp(s, -1.0, 1.0);
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(fill_rows, t, threads);
    for (auto& th : pool) th.join();
  }
  return p;
}

template <class Lookup>
SimilarityProfile build_profile(std::vector<std::string> words, std::size_t dim, Lookup&& vector_of,
                                std::string source, std::size_t threads) {
  words = canonical_words(std::move(words));
  std::vector<double> units(words.size() * dim);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto v = vector_of(words[i]);
    double norm = 0.0;
    for (auto x : v) norm += static_cast<double>(x) * static_cast<double>(x);
    if (norm == 0.0) throw Error("semsim", "zero vector for word '" + words[i] + "'");
    norm = std::sqrt(norm);
    for (std::size_t d = 0; d < dim; ++d) units[i * dim + d] = static_cast<double>(v[d]) / norm;
  }
  return profile_from_units(std::move(words), units, dim, std::move(source), threads);
}

}  // namespace detail

inline SimilarityProfile similarity_profile(const WordVectors& space, std::vector<std::string> words,
                                            std::string source = {}, std::size_t threads = 1) {
  return detail::build_profile(
      std::move(words), space.dim(),
      [&](const std::string& w) {
        const auto i = space.find(w);
        if (!i) throw Error("semsim", "word '" + w + "' not in vector space");
        return space.vector(*i);
      },
      std::move(source), threads);
}

/// Profile over a trained model, using its (subword-aware) word vectors.
template <std::floating_point Real>
SimilarityProfile similarity_profile(const EmbeddingModel<Real>& model, std::vector<std::string> words,
                                     std::string source = {}, std::size_t threads = 1) {
  return detail::build_profile(
      std::move(words), model.dim(), [&](const std::string& w) { return model.word_vector(w); },
      std::move(source), threads);
}

/// Pearson correlation of two aligned similarity profiles.
inline double second_order_r(const SimilarityProfile& a, const SimilarityProfile& b) {
  if (!a.same_pairs(b)) throw Error("semsim", "similarity profiles are over different word pairs");
  return pearson_r(a.sims, b.sims);
}

struct BootstrapResult {
  double point_r = 0.0;
  std::vector<double> replicate_rs;
  double ci_low = 0.0;   // 2.5th percentile
  double ci_high = 0.0;  // 97.5th percentile
  double mean_r = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::size_t retries = 0;  // degenerate resamples redrawn

  bool operator==(const BootstrapResult&) const = default;
};

/// Percentile with linear interpolation between order statistics.
inline double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error("semsim", "percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

/// Resamples word pairs with replacement. Replicate k draws from its own
/// generator seeded with seed + k, so any thread count gives the same result.
inline BootstrapResult bootstrap_r(const SimilarityProfile& a, const SimilarityProfile& b, std::size_t replicates,
                                   std::uint64_t seed, std::size_t threads = 1) {
  if (replicates < 1) throw Error("semsim", "bootstrap needs at least 1 replicate");
  BootstrapResult res;
  res.point_r = second_order_r(a, b);
  res.replicates = replicates;
  res.seed = seed;
  res.replicate_rs.assign(replicates, 0.0);
  const std::size_t m = a.sims.size();
  std::vector<std::size_t> retries(replicates, 0);
  constexpr std::size_t kMaxRetries = 1000;

  const auto run = [&](std::size_t first, std::size_t step) {
    std::vector<double> xs(m);
    std::vector<double> ys(m);
    for (std::size_t k = first; k < replicates; k += step) {
      Rng rng(seed + k);
      for (;;) {
        for (std::size_t i = 0; i < m; ++i) {
          const auto idx = uniform_index(rng, m);
          xs[i] = a.sims[idx];
          ys[i] = b.sims[idx];
        }
        const auto constant = [](const std::vector<double>& v) {
          return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
        };
        if (!constant(xs) && !constant(ys)) break;
        if (++retries[k] > kMaxRetries) throw Error("semsim", "bootstrap resamples are degenerate (zero variance)");
      }
      res.replicate_rs[k] = pearson_r(xs, ys);
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, replicates));
  if (threads == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          run(t, threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (auto r : retries) res.retries += r;
  res.ci_low = percentile(res.replicate_rs, 0.025);
  res.ci_high = percentile(res.replicate_rs, 0.975);
  double sum = 0.0;
  for (double r : res.replicate_rs) sum += r;
  res.mean_r = sum / static_cast<double>(replicates);
  return res;
}

/// TSV "word1\tword2\tsim_a\tsim_b" over aligned profiles.
inline void write_profile_tsv(std::ostream& out, const SimilarityProfile& a, const SimilarityProfile& b) {
  if (!a.same_pairs(b)) throw Error("semsim", "similarity profiles are over different word pairs");
  out << "word1\tword2\tsim_a\tsim_b\n";
  out.precision(17);
  for (std::size_t k = 0; k < a.pairs.size(); ++k) {
    const auto [i, j] = a.pairs[k];
    out << a.words[i] << '\t' << a.words[j] << '\t' << a.sims[k] << '\t' << b.sims[k] << '\n';
  }
}

}  // namespace corpuslens

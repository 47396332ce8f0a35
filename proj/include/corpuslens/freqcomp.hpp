#pragma once

// Word-frequency tables and the log-smoothed Pearson correlation battery.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "corpuslens/corpus.hpp"
#include "corpuslens/error.hpp"
#include "corpuslens/lexstats.hpp"
#include "corpuslens/tokenize.hpp"

namespace corpuslens {

enum class FreqFilter { words_only, content_only };

struct FreqTable {
  std::string name;
  WordCounts counts;  // every stored count >= 1
  std::size_t total = 0;

  bool operator==(const FreqTable&) const = default;
};

/// Case-sensitive counts over word tokens. `content_only` drops stopwords and
/// character names as well.
inline FreqTable frequency_table(const TokenizedCorpus& tc, FreqFilter filter,
                                 const WordSet& stops = {}, const WordSet& names = {}) {
  if (tc.documents.empty()) throw Error("freqcomp", "corpus '" + tc.name + "' is empty");
  TokenFilter f;
  if (filter == FreqFilter::content_only) {
    f.stopwords = stops;
    f.names = names;
  }
  FreqTable t{tc.name, word_counts(tc, f), 0};
  for (const auto& [w, c] : t.counts) t.total += c;
  return t;
}

enum class VocabMode { union_vocab, shared_vocab };

/// Index-aligned vectors over a sorted vocabulary.
struct PairedVectors {
  std::vector<std::string> vocab;
  std::vector<double> a;
  std::vector<double> b;

  bool operator==(const PairedVectors&) const = default;
};

/// ln(count + 1) per corpus over the union or intersection of both
/// vocabularies; a word absent from one corpus maps to ln(1) = 0 there.
inline PairedVectors log_smoothed_vectors(const FreqTable& a, const FreqTable& b, VocabMode mode) {
  if (a.counts.empty() || b.counts.empty()) throw Error("freqcomp", "frequency tables must be non-empty");
  PairedVectors v;
  const auto smooth = [](std::size_t c) { return std::log(static_cast<double>(c) + 1.0); };
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  // merge of two sorted maps
  while (ia != a.counts.end() || ib != b.counts.end()) {
    const bool take_a = ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first);
    const bool take_b = ia == a.counts.end() || (ib != b.counts.end() && ib->first < ia->first);
    if (take_a) {
      if (mode == VocabMode::union_vocab) {
        v.vocab.push_back(ia->first);
        v.a.push_back(smooth(ia->second));
        v.b.push_back(0.0);
      }
      ++ia;
    } else if (take_b) {
      if (mode == VocabMode::union_vocab) {
        v.vocab.push_back(ib->first);
        v.a.push_back(0.0);
        v.b.push_back(smooth(ib->second));
      }
      ++ib;
    } else {
      v.vocab.push_back(ia->first);
      v.a.push_back(smooth(ia->second));
      v.b.push_back(smooth(ib->second));
      ++ia;
      ++ib;
    }
  }
  if (v.vocab.empty()) throw Error("freqcomp", "no shared vocabulary between '" + a.name + "' and '" + b.name + "'");
  return v;
}

/// Pearson product-moment correlation (two-pass).
inline double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error("freqcomp", "pearson_r length mismatch (" + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw Error("freqcomp", "pearson_r needs at least 2 points");
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) throw Error("freqcomp", "pearson_r undefined for zero variance");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("freqcomp", "pearson_r undefined for zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson_r(std::span<const double>(x), std::span<const double>(y));
}

struct FreqComparison {
  double r_all = 0.0;
  double r_shared = 0.0;
  double r_no_function_words = 0.0;
  std::size_t n_all = 0;
  std::size_t n_shared = 0;
  std::size_t n_no_function_words = 0;

  bool operator==(const FreqComparison&) const = default;
};

/// r over the union vocabulary, over the shared vocabulary, and over the
/// union of content words (stopwords and names removed).
inline FreqComparison compare_frequencies(const TokenizedCorpus& a, const TokenizedCorpus& b,
                                          const WordSet& stops, const WordSet& names) {
  const auto wa = frequency_table(a, FreqFilter::words_only);
  const auto wb = frequency_table(b, FreqFilter::words_only);
  const auto all = log_smoothed_vectors(wa, wb, VocabMode::union_vocab);
  const auto shared = log_smoothed_vectors(wa, wb, VocabMode::shared_vocab);
  const auto content = log_smoothed_vectors(frequency_table(a, FreqFilter::content_only, stops, names),
                                            frequency_table(b, FreqFilter::content_only, stops, names),
                                            VocabMode::union_vocab);
  FreqComparison c;
  c.r_all = pearson_r(all.a, all.b);
  c.n_all = all.vocab.size();
  c.r_shared = pearson_r(shared.a, shared.b);
  c.n_shared = shared.vocab.size();
  c.r_no_function_words = pearson_r(content.a, content.b);
  c.n_no_function_words = content.vocab.size();
  return c;
}

/// Scatter data as TSV with header "word\tlog_a\tlog_b".
inline void write_scatter_tsv(std::ostream& out, const PairedVectors& v) {
  out << "word\tlog_a\tlog_b\n";
  out.precision(17);
  for (std::size_t i = 0; i < v.vocab.size(); ++i) out << v.vocab[i] << '\t' << v.a[i] << '\t' << v.b[i] << '\n';
}

}  // namespace corpuslens

#pragma once

// Word-level descriptive statistics: totals, Herdan's log type-token ratio,
// word/sentence length distributions and frequency rankings.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corpuslens/corpus.hpp"
#include "corpuslens/error.hpp"
#include "corpuslens/tokenize.hpp"
#include "corpuslens/utf8.hpp"

namespace corpuslens {

struct CorpusCounts {
  std::size_t n_texts = 0;
  std::size_t n_tokens = 0;  // all tokens, punctuation included
  std::size_t n_types = 0;   // distinct word surfaces, case-sensitive
  double avg_tokens_per_text = 0.0;
  double log_ttr = 0.0;

  bool operator==(const CorpusCounts&) const = default;
};

/// ln(types) / ln(tokens). The ratio of logarithms does not depend on the base.
inline double herdan_log_ttr(std::size_t n_types, std::size_t n_tokens) {
  if (n_tokens < 2) throw Error("lexstats", "log-TTR needs at least 2 tokens");
  if (n_types < 1 || n_types > n_tokens) {
    throw Error("lexstats", "log-TTR needs 1 <= types <= tokens (got " + std::to_string(n_types) +
                                " types, " + std::to_string(n_tokens) + " tokens)");
  }
  return std::log(static_cast<double>(n_types)) / std::log(static_cast<double>(n_tokens));
}

/// Word filter shared by the ranking and frequency code. Only word tokens pass;
/// empty sets disable the corresponding filter.
struct TokenFilter {
  WordSet stopwords;
  WordSet names;
  std::size_t min_letters = 0;

  bool accepts(const Token& t) const {
    if (!t.is_word) return false;
    if (min_letters > 0 && utf8::letter_count(t.surface) < min_letters) return false;
    if (!stopwords.empty() && stopwords.contains(t.surface)) return false;
    if (!names.empty() && names.contains(t.surface)) return false;
    return true;
  }
};

using WordCounts = std::map<std::string, std::size_t>;

inline WordCounts word_counts(const TokenizedCorpus& tc, const TokenFilter& filter = {}) {
  WordCounts counts;
  for_each_token(tc, [&](const Token& t) {
    if (filter.accepts(t)) ++counts[t.surface];
  });
  return counts;
}

inline CorpusCounts corpus_counts(const TokenizedCorpus& tc) {
  if (tc.documents.empty()) throw Error("lexstats", "corpus '" + tc.name + "' is empty");
  CorpusCounts c;
  c.n_texts = tc.documents.size();
  for_each_token(tc, [&](const Token&) { ++c.n_tokens; });
  if (c.n_tokens < 2) throw Error("lexstats", "corpus '" + tc.name + "' has fewer than 2 tokens");
  c.n_types = word_counts(tc).size();
  c.avg_tokens_per_text = static_cast<double>(c.n_tokens) / static_cast<double>(c.n_texts);
  c.log_ttr = herdan_log_ttr(c.n_types, c.n_tokens);
  return c;
}

struct LengthDistribution {
  std::map<std::size_t, std::size_t> histogram;  // outliers excluded
  double median = 0.0;                           // over the full multiset
  std::size_t outlier_threshold = 0;             // 0: no cap
  std::size_t n_outliers_excluded = 0;

  bool operator==(const LengthDistribution&) const = default;
};

struct LengthDistributions {
  LengthDistribution word;
  LengthDistribution sentence;

  bool operator==(const LengthDistributions&) const = default;
};

namespace detail {

inline double histogram_median(const std::map<std::size_t, std::size_t>& h) {
  std::size_t n = 0;
  for (const auto& [len, count] : h) n += count;
  if (n == 0) return 0.0;
  const std::size_t lo = (n - 1) / 2;
  const std::size_t hi = n / 2;
  double lo_v = 0.0;
  double hi_v = 0.0;
  std::size_t seen = 0;
  bool have_lo = false;
  for (const auto& [len, count] : h) {
    if (!have_lo && lo < seen + count) {
      lo_v = static_cast<double>(len);
      have_lo = true;
    }
    if (hi < seen + count) {
      hi_v = static_cast<double>(len);
      break;
    }
    seen += count;
  }
  return (lo_v + hi_v) / 2.0;
}

inline LengthDistribution make_distribution(std::map<std::size_t, std::size_t> full, std::size_t cap) {
  LengthDistribution d;
  d.median = histogram_median(full);
  d.outlier_threshold = cap;
  if (cap > 0) {
    for (auto it = full.upper_bound(cap); it != full.end();) {
      d.n_outliers_excluded += it->second;
      it = full.erase(it);
    }
  }
  d.histogram = std::move(full);
  return d;
}

}  // namespace detail

/// Word lengths in letters over word tokens; sentence lengths in word tokens.
/// Sentences longer than `sentence_outlier_cap` words are dropped from the
/// sentence histogram (but not from its median). Sentences without any word
/// token are not counted.
inline LengthDistributions length_distributions(const TokenizedCorpus& tc,
                                                std::size_t sentence_outlier_cap = 100) {
  if (tc.documents.empty()) throw Error("lexstats", "corpus '" + tc.name + "' is empty");
  std::map<std::size_t, std::size_t> words;
  std::map<std::size_t, std::size_t> sentences;
  for (const auto& d : tc.documents) {
    for (const auto& s : d.sentences) {
      std::size_t n_words = 0;
      for (const auto& t : s.tokens) {
        if (!t.is_word) continue;
        ++n_words;
        ++words[utf8::letter_count(t.surface)];
      }
      if (n_words > 0) ++sentences[n_words];
    }
  }
  return {detail::make_distribution(std::move(words), 0),
          detail::make_distribution(std::move(sentences), sentence_outlier_cap)};
}

struct WordCount {
  std::string word;
  std::size_t count = 0;

  bool operator==(const WordCount&) const = default;
};

namespace detail {

inline void require_positive(std::size_t n) {
  if (n == 0) throw Error("lexstats", "ranking length n must be >= 1");
}

}  // namespace detail

/// Most frequent words, count descending, ties lexicographic.
inline std::vector<WordCount> top_words(const TokenizedCorpus& tc, std::size_t n,
                                        const TokenFilter& filter = {}) {
  detail::require_positive(n);
  std::vector<WordCount> ranked;
  for (const auto& [w, c] : word_counts(tc, filter)) ranked.push_back({w, c});
  std::sort(ranked.begin(), ranked.end(), [](const WordCount& a, const WordCount& b) {
    return a.count != b.count ? a.count > b.count : a.word < b.word;
  });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

struct SharedWordRow {
  std::string word;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  std::size_t total = 0;

  bool operator==(const SharedWordRow&) const = default;
};

/// Words present in both corpora after filtering, ranked by combined count.
inline std::vector<SharedWordRow> shared_top_words(const TokenizedCorpus& a, const TokenizedCorpus& b,
                                                   std::size_t n, const TokenFilter& filter = {}) {
  detail::require_positive(n);
  const auto ca = word_counts(a, filter);
  const auto cb = word_counts(b, filter);
  std::vector<SharedWordRow> rows;
  for (const auto& [w, count_a] : ca) {
    if (const auto it = cb.find(w); it != cb.end()) rows.push_back({w, count_a, it->second, count_a + it->second});
  }
  std::sort(rows.begin(), rows.end(), [](const SharedWordRow& x, const SharedWordRow& y) {
    return x.total != y.total ? x.total > y.total : x.word < y.word;
  });
  if (rows.size() > n) rows.resize(n);
  return rows;
}

struct SharedTypeStats {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::size_t n_shared = 0;
  std::size_t n_union = 0;
  double pct_shared = 0.0;  // of the union
  double pct_of_a = 0.0;
  double pct_of_b = 0.0;

  bool operator==(const SharedTypeStats&) const = default;
};

inline SharedTypeStats shared_type_stats(const TokenizedCorpus& a, const TokenizedCorpus& b,
                                         const TokenFilter& filter = {}) {
  const auto ca = word_counts(a, filter);
  const auto cb = word_counts(b, filter);
  if (ca.empty() || cb.empty()) throw Error("lexstats", "shared type statistics need non-empty corpora");
  SharedTypeStats s;
  s.n_a = ca.size();
  s.n_b = cb.size();
  for (const auto& [w, c] : ca) s.n_shared += cb.count(w);
  s.n_union = s.n_a + s.n_b - s.n_shared;
  const auto pct = [](std::size_t num, std::size_t den) {
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
  };
  s.pct_shared = pct(s.n_shared, s.n_union);
  s.pct_of_a = pct(s.n_shared, s.n_a);
  s.pct_of_b = pct(s.n_shared, s.n_b);
  return s;
}

}  // namespace corpuslens

#pragma once

// Skip-gram embeddings with character n-gram subwords and negative sampling,
// trained from scratch per corpus.
//
// Layout follows the usual subword model: the input matrix holds one row per
// vocabulary word followed by `buckets` rows for hashed n-grams; a word's
// hidden vector is the mean of its own row and its n-gram rows. The output
// matrix holds one row per vocabulary word.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "corpuslens/error.hpp"
#include "corpuslens/hash.hpp"
#include "corpuslens/random.hpp"
#include "corpuslens/tokenize.hpp"
#include "corpuslens/utf8.hpp"

namespace corpuslens {

struct EmbedParams {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t epochs = 5;
  std::size_t negatives = 5;
  double lr0 = 0.05;  // decays linearly to 0
  std::size_t min_count = 1;
  std::size_t nmin = 3;
  std::size_t nmax = 6;
  std::size_t buckets = 2'000'000;
  std::uint64_t seed = 1;
  double subsample = 0.0;   // frequent-word subsampling threshold; 0 disables
  std::size_t threads = 1;  // > 1 trains lock-free and is not reproducible

  void validate() const {
    if (dim < 1) throw Error("embed", "dim must be >= 1");
    if (window < 1) throw Error("embed", "window must be >= 1");
    if (nmin < 1 || nmin > nmax) throw Error("embed", "need 1 <= nmin <= nmax");
    if (!(lr0 > 0.0)) throw Error("embed", "lr0 must be > 0");
    if (buckets < 1) throw Error("embed", "buckets must be >= 1");
    if (min_count < 1) throw Error("embed", "min_count must be >= 1");
    if (threads < 1) throw Error("embed", "threads must be >= 1");
    if (subsample < 0.0) throw Error("embed", "subsample must be >= 0");
  }

  bool operator==(const EmbedParams&) const = default;
};

/// Word types with counts. Indices are dense and ordered by count descending,
/// then lexicographically.
class Vocab {
 public:
  Vocab() = default;

  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t i) const { return words_[i]; }
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  /// Occurrences of in-vocabulary words.
  std::uint64_t total_tokens() const { return total_; }

  std::optional<std::uint32_t> index(std::string_view w) const {
    const auto it = index_.find(std::string(w));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Keep probabilities for subsampling threshold t (sqrt(t/f) + t/f, capped at 1).
  std::vector<double> keep_probabilities(double t) const {
    std::vector<double> p(size(), 1.0);
    if (t <= 0.0) return p;
    for (std::size_t i = 0; i < size(); ++i) {
      const double f = static_cast<double>(counts_[i]) / static_cast<double>(total_);
      p[i] = std::min(1.0, std::sqrt(t / f) + t / f);
    }
    return p;
  }

  bool operator==(const Vocab& o) const { return words_ == o.words_ && counts_ == o.counts_; }

 private:
  friend Vocab build_vocab(const TokenizedCorpus&, std::size_t);

  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint64_t total_ = 0;
};

inline Vocab build_vocab(const TokenizedCorpus& tc, std::size_t min_count) {
  if (tc.documents.empty()) throw Error("embed", "corpus '" + tc.name + "' is empty");
  std::unordered_map<std::string, std::uint64_t> counts;
  for_each_token(tc, [&](const Token& t) {
    if (t.is_word) ++counts[t.surface];
  });
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [w, c] : counts) {
    if (c >= min_count) kept.emplace_back(w, c);
  }
  if (kept.empty()) throw Error("embed", "empty vocabulary after min_count filtering");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  Vocab v;
  for (auto& [w, c] : kept) {
    v.index_.emplace(w, static_cast<std::uint32_t>(v.words_.size()));
    v.words_.push_back(std::move(w));
    v.counts_.push_back(c);
    v.total_ += c;
  }
  return v;
}

/// Character n-grams of "<word>" for lengths nmin..nmax, shortest first and by
/// position within a length. Characters are Unicode scalars. The bare
/// boundary markers are never emitted as 1-grams.
inline std::vector<std::string> subword_ngrams(std::string_view word, std::size_t nmin, std::size_t nmax) {
  if (word.empty()) throw Error("embed", "subword_ngrams of an empty word");
  std::vector<char32_t> w;
  w.push_back('<');
  for (char32_t c : utf8::decode(word, "embed")) w.push_back(c);
  w.push_back('>');
  std::vector<std::string> out;
  for (std::size_t n = nmin; n <= nmax && n <= w.size(); ++n) {
    for (std::size_t i = 0; i + n <= w.size(); ++i) {
      if (n == 1 && (i == 0 || i + 1 == w.size())) continue;
      out.push_back(utf8::encode(std::vector<char32_t>(w.begin() + static_cast<std::ptrdiff_t>(i),
                                                       w.begin() + static_cast<std::ptrdiff_t>(i + n))));
    }
  }
  return out;
}

/// FNV-1a (32 bit) of the UTF-8 bytes, modulo `buckets`.
inline std::uint32_t ngram_bucket(std::string_view ngram, std::size_t buckets) {
  if (buckets < 1) throw Error("embed", "buckets must be >= 1");
  return static_cast<std::uint32_t>(fnv1a32(ngram) % buckets);
}

namespace detail {

template <std::floating_point Real>
Real sigmoid(Real x) {
  if (x >= 0) return Real(1) / (Real(1) + std::exp(-x));
  const Real e = std::exp(x);
  return e / (Real(1) + e);
}

/// ln(1 + e^x) without overflow.
template <std::floating_point Real>
Real softplus(Real x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

template <std::floating_point Real>
Real dot(std::span<const Real> a, std::span<const Real> b) {
  Real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

/// One negative-sampling gradient step for a (center, context) pair.
///
/// Loss L = -ln s(u.v) - sum_n ln s(-u.v_n). Output vectors (`context` and
/// each of `negatives`) are updated in place; `center_update` receives
/// -lr * dL/du so the caller can apply it to the center vector or to every
/// subword row that makes it up. Returns the loss before the update.
template <std::floating_point Real>
Real sgns_step(std::span<const Real> center, std::span<Real> context,
               std::span<const std::span<Real>> negatives, Real lr, std::span<Real> center_update) {
  const std::size_t d = center.size();
  if (context.size() != d || center_update.size() != d) throw Error("embed", "sgns_step dimension mismatch");
  std::fill(center_update.begin(), center_update.end(), Real(0));
  Real loss = 0;
  const auto apply = [&](std::span<Real> out, bool positive) {
    if (out.size() != d) throw Error("embed", "sgns_step dimension mismatch");
    const Real score = detail::dot<Real>(center, out);
    loss += positive ? detail::softplus(-score) : detail::softplus(score);
    const Real alpha = lr * ((positive ? Real(1) : Real(0)) - detail::sigmoid(score));
    for (std::size_t k = 0; k < d; ++k) {
      center_update[k] += alpha * out[k];
      out[k] += alpha * center[k];
    }
  };
  apply(context, true);
  for (const auto& neg : negatives) apply(neg, false);
  if (!std::isfinite(loss) ||
      !std::all_of(center_update.begin(), center_update.end(), [](Real x) { return std::isfinite(x); })) {
    throw Error("embed", "training diverged (non-finite value in gradient step)");
  }
  return loss;
}

/// Same as above, applying the update to `center` directly.
template <std::floating_point Real>
Real sgns_step(std::span<Real> center, std::span<Real> context, std::span<const std::span<Real>> negatives,
               Real lr) {
  std::vector<Real> update(center.size());
  const Real loss =
      sgns_step<Real>(std::span<const Real>(center), context, negatives, lr, std::span<Real>(update));
  for (std::size_t k = 0; k < center.size(); ++k) center[k] += update[k];
  return loss;
}

/// Dense row-major matrix.
template <std::floating_point Real>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Real(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<Real> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Real> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<Real>& data() { return data_; }
  const std::vector<Real>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

/// Plain word -> vector table, the persisted form of a trained model.
/// `counts` is empty when unknown (e.g. loaded from a text file).
class WordVectors {
 public:
  WordVectors() = default;
  WordVectors(std::vector<std::string> words, std::size_t dim, std::vector<float> data,
              std::vector<std::uint64_t> counts = {})
      : words_(std::move(words)), counts_(std::move(counts)), dim_(dim), data_(std::move(data)) {
    if (dim_ < 1) throw Error("embed", "vector dimension must be >= 1");
    if (data_.size() != words_.size() * dim_) throw Error("embed", "vector table size mismatch");
    if (!counts_.empty() && counts_.size() != words_.size()) throw Error("embed", "count table size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i].empty()) throw Error("embed", "empty word in vector table");
      if (!index_.emplace(words_[i], i).second) throw Error("embed", "duplicate word '" + words_[i] + "'");
    }
  }

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& words() const { return words_; }
  bool has_counts() const { return !counts_.empty(); }
  std::uint64_t count(std::size_t i) const { return counts_.empty() ? 0 : counts_[i]; }
  std::span<const float> vector(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<float> mutable_vector(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  const std::vector<float>& data() const { return data_; }

  std::optional<std::size_t> find(std::string_view w) const {
    const auto it = index_.find(std::string(w));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const WordVectors& o) const {
    return words_ == o.words_ && counts_ == o.counts_ && dim_ == o.dim_ && data_ == o.data_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

template <std::floating_point Real = float>
class EmbeddingModel {
 public:
  /// Allocates (V + buckets) x dim input rows, uniform in [-1/dim, 1/dim],
  /// and V x dim zero output rows.
  EmbeddingModel(Vocab vocab, EmbedParams params)
      : vocab_(std::move(vocab)),
        params_(params),
        input_(vocab_.size() + params.buckets, params.dim),
        output_(vocab_.size(), params.dim) {
    params_.validate();
    if (vocab_.size() == 0) throw Error("embed", "empty vocabulary");
    Rng rng(params_.seed);
    const double bound = 1.0 / static_cast<double>(params_.dim);
    for (auto& x : input_.data()) x = static_cast<Real>(uniform_real(rng, -bound, bound));
    subwords_.reserve(vocab_.size());
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      std::vector<std::uint32_t> rows{static_cast<std::uint32_t>(i)};
      append_ngram_rows(vocab_.word(i), rows);
      subwords_.push_back(std::move(rows));
    }
  }

  const Vocab& vocab() const { return vocab_; }
  const EmbedParams& params() const { return params_; }
  std::size_t dim() const { return params_.dim; }
  Matrix<Real>& input() { return input_; }
  const Matrix<Real>& input() const { return input_; }
  Matrix<Real>& output() { return output_; }
  const Matrix<Real>& output() const { return output_; }

  /// Input rows averaged into the word's vector (its own row first).
  const std::vector<std::uint32_t>& subword_rows(std::size_t word) const { return subwords_[word]; }

  std::vector<std::uint32_t> rows_for(std::string_view word) const {
    if (const auto i = vocab_.index(word)) return subwords_[*i];
    std::vector<std::uint32_t> rows;
    append_ngram_rows(word, rows);
    return rows;
  }

  /// Mean of the word's own row (if in vocabulary) and its n-gram rows.
  /// Defined for every non-empty string; zero when no row applies.
  std::vector<Real> word_vector(std::string_view word) const {
    if (word.empty()) throw Error("embed", "word_vector of an empty word");
    const auto rows = rows_for(word);
    std::vector<double> acc(dim(), 0.0);
    for (auto r : rows) {
      const auto v = input_.row(r);
      for (std::size_t k = 0; k < dim(); ++k) acc[k] += v[k];
    }
    std::vector<Real> out(dim(), Real(0));
    if (rows.empty()) return out;
    for (std::size_t k = 0; k < dim(); ++k) out[k] = static_cast<Real>(acc[k] / static_cast<double>(rows.size()));
    return out;
  }

  WordVectors to_word_vectors() const {
    std::vector<float> data;
    data.reserve(vocab_.size() * dim());
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      for (Real x : word_vector(vocab_.word(i))) data.push_back(static_cast<float>(x));
    }
    return WordVectors(vocab_.words(), dim(), std::move(data), vocab_.counts());
  }

  double mean_loss() const { return mean_loss_; }
  void set_mean_loss(double l) { mean_loss_ = l; }

  bool operator==(const EmbeddingModel& o) const {
    return vocab_ == o.vocab_ && params_ == o.params_ && input_ == o.input_ && output_ == o.output_;
  }

 private:
  void append_ngram_rows(std::string_view word, std::vector<std::uint32_t>& rows) const {
    for (const auto& g : subword_ngrams(word, params_.nmin, params_.nmax)) {
      rows.push_back(static_cast<std::uint32_t>(vocab_.size() + ngram_bucket(g, params_.buckets)));
    }
  }

  Vocab vocab_;
  EmbedParams params_;
  Matrix<Real> input_;
  Matrix<Real> output_;
  std::vector<std::vector<std::uint32_t>> subwords_;
  double mean_loss_ = 0.0;
};

/// Draws word indices from the unigram distribution raised to 3/4.
class NegativeSampler {
 public:
  explicit NegativeSampler(const std::vector<std::uint64_t>& counts) {
    cumulative_.reserve(counts.size());
    double acc = 0.0;
    for (auto c : counts) {
      acc += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(acc);
    }
  }

  std::uint32_t draw(Rng& rng) const {
    const double u = uniform_unit(rng) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1));
  }

 private:
  std::vector<double> cumulative_;
};

namespace detail {

template <std::floating_point Real>
struct SkipgramTrainer {
  EmbeddingModel<Real>& model;
  const std::vector<std::vector<std::uint32_t>>& sentences;
  const NegativeSampler& sampler;
  std::vector<double> keep;
  std::uint64_t total_work;  // epochs * tokens
  std::atomic<std::uint64_t> processed{0};

  /// Trains on sentences [begin, end) for all epochs. Returns (loss sum, pairs).
  std::pair<double, std::uint64_t> run(std::size_t begin, std::size_t end, std::uint64_t seed) {
    const auto& p = model.params();
    const std::size_t d = p.dim;
    const std::size_t vocab_size = model.vocab().size();
    Rng rng(seed);
    std::vector<Real> hidden(d);
    std::vector<Real> update(d);
    std::vector<std::span<Real>> negs;
    negs.reserve(p.negatives);
    std::vector<std::uint32_t> line;
    double loss_sum = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t epoch = 0; epoch < p.epochs; ++epoch) {
      for (std::size_t s = begin; s < end; ++s) {
        line.clear();
        for (auto w : sentences[s]) {
          if (p.subsample <= 0.0 || uniform_unit(rng) < keep[w]) line.push_back(w);
        }
        for (std::size_t pos = 0; pos < line.size(); ++pos) {
          const double progress =
              static_cast<double>(processed.load(std::memory_order_relaxed)) / static_cast<double>(total_work);
          const Real lr = static_cast<Real>(p.lr0 * std::max(0.0, 1.0 - progress));
          const auto reach = static_cast<std::ptrdiff_t>(1 + uniform_index(rng, p.window));
          const auto& rows = model.subword_rows(line[pos]);
          for (std::ptrdiff_t off = -reach; off <= reach; ++off) {
            const auto ctx = static_cast<std::ptrdiff_t>(pos) + off;
            if (off == 0 || ctx < 0 || ctx >= static_cast<std::ptrdiff_t>(line.size())) continue;
            const std::uint32_t target = line[static_cast<std::size_t>(ctx)];
            std::fill(hidden.begin(), hidden.end(), Real(0));
            for (auto r : rows) {
              const auto v = model.input().row(r);
              for (std::size_t k = 0; k < d; ++k) hidden[k] += v[k];
            }
            const Real inv = Real(1) / static_cast<Real>(rows.size());
            for (auto& h : hidden) h *= inv;
            negs.clear();
            for (std::size_t n = 0; n < p.negatives && vocab_size > 1; ++n) {
              std::uint32_t neg = sampler.draw(rng);
              while (neg == target) neg = sampler.draw(rng);
              negs.push_back(model.output().row(neg));
            }
            loss_sum += sgns_step<Real>(std::span<const Real>(hidden), model.output().row(target),
                                        std::span<const std::span<Real>>(negs), lr, std::span<Real>(update));
            ++pairs;
            for (auto r : rows) {
              auto v = model.input().row(r);
              for (std::size_t k = 0; k < d; ++k) v[k] += update[k];
            }
          }
          processed.fetch_add(1, std::memory_order_relaxed);
        }
        // tokens dropped by subsampling still count as processed work
        processed.fetch_add(sentences[s].size() - line.size(), std::memory_order_relaxed);
      }
    }
    return {loss_sum, pairs};
  }
};

}  // namespace detail

/// Trains one model on the word tokens of `tc` (windows stay within a
/// sentence). With params.threads == 1 the result is a pure function of the
/// corpus and the parameters.
template <std::floating_point Real = float>
EmbeddingModel<Real> train_skipgram(const TokenizedCorpus& tc, const EmbedParams& params) {
  params.validate();
  EmbeddingModel<Real> model(build_vocab(tc, params.min_count), params);
  std::vector<std::vector<std::uint32_t>> sentences;
  std::uint64_t tokens = 0;
  for (const auto& doc : tc.documents) {
    for (const auto& s : doc.sentences) {
      std::vector<std::uint32_t> ids;
      for (const auto& t : s.tokens) {
        if (!t.is_word) continue;
        if (const auto i = model.vocab().index(t.surface)) ids.push_back(*i);
      }
      tokens += ids.size();
      if (!ids.empty()) sentences.push_back(std::move(ids));
    }
  }
  const NegativeSampler sampler(model.vocab().counts());
  detail::SkipgramTrainer<Real> trainer{model, sentences, sampler, model.vocab().keep_probabilities(params.subsample),
                                        std::max<std::uint64_t>(1, tokens * params.epochs)};
  double loss = 0.0;
  std::uint64_t pairs = 0;
  const std::size_t threads = std::min<std::size_t>(params.threads, std::max<std::size_t>(1, sentences.size()));
  if (threads == 1) {
    std::tie(loss, pairs) = trainer.run(0, sentences.size(), params.seed + 1);
  } else {
    std::vector<std::pair<double, std::uint64_t>> results(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (sentences.size() + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t b = std::min(sentences.size(), t * chunk);
      const std::size_t e = std::min(sentences.size(), b + chunk);
      pool.emplace_back([&, t, b, e] { results[t] = trainer.run(b, e, params.seed + 1 + t); });
    }
    for (auto& th : pool) th.join();
    for (const auto& [l, n] : results) {
      loss += l;
      pairs += n;
    }
  }
  model.set_mean_loss(pairs ? loss / static_cast<double>(pairs) : 0.0);
  for (Real x : model.input().data()) {
    if (!std::isfinite(x)) throw Error("embed", "training diverged (non-finite input vector)");
  }
  return model;
}

/// Text format: header "V dim", then one line per word: the word followed by
/// dim values. Values are written in shortest round-trip form.
inline void write_vectors(std::ostream& out, const WordVectors& wv) {
  out << wv.size() << ' ' << wv.dim() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < wv.size(); ++i) {
    out << wv.words()[i];
    for (float x : wv.vector(i)) {
      const auto r = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf));
    }
    out << '\n';
  }
}

inline void save_vectors(const std::filesystem::path& path, const WordVectors& wv) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("embed", "cannot write " + path.string());
  write_vectors(out, wv);
  if (!out) throw Error("embed", "write failure on " + path.string());
}

template <std::floating_point Real>
void save_vectors(const std::filesystem::path& path, const EmbeddingModel<Real>& m) {
  save_vectors(path, m.to_word_vectors());
}

inline WordVectors read_vectors(std::istream& in, std::string_view origin = "vectors") {
  const std::string o(origin);
  std::string line;
  if (!std::getline(in, line)) throw Error("embed", o + ": missing header");
  std::size_t n = 0;
  std::size_t dim = 0;
  {
    const auto sp = line.find(' ');
    const auto parse = [&](std::string_view s, std::size_t& v) {
      const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      return r.ec == std::errc() && r.ptr == s.data() + s.size() && !s.empty();
    };
    std::string_view l(line);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (sp == std::string::npos || !parse(l.substr(0, sp), n) || !parse(l.substr(sp + 1), dim)) {
      throw Error("embed", o + ": malformed header '" + line + "' (expected \"V dim\")");
    }
  }
  if (dim == 0) throw Error("embed", o + ": dimension must be >= 1");
  std::vector<std::string> words;
  std::vector<float> data;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l(line);
    while (!l.empty() && (l.back() == '\r' || l.back() == ' ')) l.remove_suffix(1);
    if (l.empty()) continue;
    const auto where = o + ": line " + std::to_string(lineno) + ": ";
    if (words.size() == n) throw Error("embed", o + ": header declares " + std::to_string(n) + " rows but file has more");
    const auto sp = l.find(' ');
    if (sp == std::string_view::npos) throw Error("embed", where + "dimension mismatch (no values)");
    words.emplace_back(l.substr(0, sp));
    l.remove_prefix(sp + 1);
    std::size_t got = 0;
    while (!l.empty()) {
      const auto next = l.find(' ');
      const auto field = l.substr(0, next);
      float x = 0.0f;
      const auto r = std::from_chars(field.data(), field.data() + field.size(), x);
      if (r.ec != std::errc() || r.ptr != field.data() + field.size()) {
        throw Error("embed", where + "malformed value '" + std::string(field) + "'");
      }
      data.push_back(x);
      ++got;
      if (next == std::string_view::npos) break;
      l.remove_prefix(next + 1);
    }
    if (got != dim) {
      throw Error("embed", where + "dimension mismatch (expected " + std::to_string(dim) + ", got " +
                               std::to_string(got) + ")");
    }
  }
  if (words.size() != n) {
    throw Error("embed", o + ": header declares " + std::to_string(n) + " rows, found " + std::to_string(words.size()));
  }
  return WordVectors(std::move(words), dim, std::move(data));
}

inline WordVectors load_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("embed", "cannot open " + path.string());
  return read_vectors(in, path.string());
}

}  // namespace corpuslens

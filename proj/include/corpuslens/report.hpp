#pragma once

// Pipeline orchestration and report rendering.
//
// run_pipeline() executes tokenize -> lexstats -> freqcomp -> postag ->
// embed -> semsim over the corpora named in a JSON config and collects the
// results, plus a provenance block, in an AnalysisReport. render_*() turn a
// report into Markdown tables, schema-versioned JSON, or one TSV per
// table/figure.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "corpuslens/corpus.hpp"
#include "corpuslens/embed.hpp"
#include "corpuslens/error.hpp"
#include "corpuslens/freqcomp.hpp"
#include "corpuslens/hash.hpp"
#include "corpuslens/lexstats.hpp"
#include "corpuslens/postag.hpp"
#include "corpuslens/semsim.hpp"
#include "corpuslens/tokenize.hpp"

namespace corpuslens {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// ---------------------------------------------------------------- config --

struct CorpusInput {
  std::string name;
  std::string manifest;
  std::string conllu;  // optional gold/automatic tags

  bool operator==(const CorpusInput&) const = default;
};

struct AnalysisSwitches {
  bool frequencies = true;
  bool top_words = true;
  bool pos = true;
  bool semantic = true;

  bool operator==(const AnalysisSwitches&) const = default;
};

struct PipelineConfig {
  std::vector<CorpusInput> corpora;
  std::string reference;  // default: first corpus
  std::string focus;      // default: last corpus
  std::string stopwords;  // empty: built-in German list
  std::vector<std::string> names{"Lars", "Lea", "Dodo"};
  std::string lexicon;  // baseline tagger for corpora without CoNLL-U
  std::string text_layer = "as supplied";
  std::uint64_t seed = 1;
  AnalysisSwitches analyses;
  std::size_t sentence_outlier_cap = 100;
  std::size_t top_n = 10;
  std::size_t long_min_letters = 11;
  EmbedParams embedding;
  std::size_t bootstrap = 1000;
  std::size_t semantic_min_count = 1;
  std::size_t semantic_max_words = 0;  // 0: every shared content word

  // Execution settings; they never change results and stay out of provenance.
  std::size_t jobs = 1;
  std::size_t bootstrap_threads = 1;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& p) const {
    const std::filesystem::path q(p);
    return q.is_absolute() || base_dir.empty() ? q : base_dir / q;
  }

  const CorpusInput* find(const std::string& name) const {
    for (const auto& c : corpora) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

inline nlohmann::json normalized_config(const PipelineConfig& c) {
  using nlohmann::json;
  json corpora = json::array();
  for (const auto& in : c.corpora) {
    json e{{"name", in.name}, {"manifest", in.manifest}};
    if (!in.conllu.empty()) e["conllu"] = in.conllu;
    corpora.push_back(e);
  }
  const auto& p = c.embedding;
  return json{{"corpora", corpora},
              {"reference", c.reference},
              {"focus", c.focus},
              {"stopwords", c.stopwords},
              {"names", c.names},
              {"lexicon", c.lexicon},
              {"text_layer", c.text_layer},
              {"seed", c.seed},
              {"analyses",
               {{"frequencies", c.analyses.frequencies},
                {"top_words", c.analyses.top_words},
                {"pos", c.analyses.pos},
                {"semantic", c.analyses.semantic}}},
              {"lengths", {{"sentence_outlier_cap", c.sentence_outlier_cap}}},
              {"top_words", {{"n", c.top_n}, {"long_min_letters", c.long_min_letters}}},
              {"embedding",
               {{"dim", p.dim},
                {"window", p.window},
                {"epochs", p.epochs},
                {"negatives", p.negatives},
                {"lr0", p.lr0},
                {"min_count", p.min_count},
                {"nmin", p.nmin},
                {"nmax", p.nmax},
                {"buckets", p.buckets},
                {"subsample", p.subsample},
                {"threads", p.threads}}},
              {"semantic",
               {{"bootstrap", c.bootstrap}, {"min_count", c.semantic_min_count}, {"max_words", c.semantic_max_words}}}};
}

/// Parses a config object. Unknown keys are rejected so typos surface early.
inline PipelineConfig parse_config(const nlohmann::json& j, std::filesystem::path base_dir = {}) {
  PipelineConfig c;
  c.base_dir = std::move(base_dir);
  const auto check_keys = [](const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                             const std::string& where) {
    if (!obj.is_object()) throw Error("report", "config: '" + where + "' must be an object");
    for (const auto& [k, v] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        throw Error("report", "config: unknown key '" + where + (where.empty() ? "" : ".") + k + "'");
      }
    }
  };
  try {
    check_keys(j,
               {"corpora", "reference", "focus", "stopwords", "names", "lexicon", "text_layer", "seed", "analyses",
                "lengths", "top_words", "embedding", "semantic", "jobs"},
               "");
    for (const auto& e : j.at("corpora")) {
      check_keys(e, {"name", "manifest", "conllu"}, "corpora[]");
      c.corpora.push_back({e.at("name").get<std::string>(), e.at("manifest").get<std::string>(),
                           e.value("conllu", std::string())});
    }
    c.reference = j.value("reference", c.corpora.empty() ? std::string() : c.corpora.front().name);
    c.focus = j.value("focus", c.corpora.empty() ? std::string() : c.corpora.back().name);
    c.stopwords = j.value("stopwords", c.stopwords);
    c.names = j.value("names", c.names);
    c.lexicon = j.value("lexicon", c.lexicon);
    c.text_layer = j.value("text_layer", c.text_layer);
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("analyses")) {
      const auto& a = j.at("analyses");
      check_keys(a, {"frequencies", "top_words", "pos", "semantic"}, "analyses");
      c.analyses.frequencies = a.value("frequencies", true);
      c.analyses.top_words = a.value("top_words", true);
      c.analyses.pos = a.value("pos", true);
      c.analyses.semantic = a.value("semantic", true);
    }
    if (j.contains("lengths")) {
      check_keys(j.at("lengths"), {"sentence_outlier_cap"}, "lengths");
      c.sentence_outlier_cap = j.at("lengths").value("sentence_outlier_cap", c.sentence_outlier_cap);
    }
    if (j.contains("top_words")) {
      const auto& t = j.at("top_words");
      check_keys(t, {"n", "long_min_letters"}, "top_words");
      c.top_n = t.value("n", c.top_n);
      c.long_min_letters = t.value("long_min_letters", c.long_min_letters);
    }
    if (j.contains("embedding")) {
      const auto& e = j.at("embedding");
      check_keys(e,
                 {"dim", "window", "epochs", "negatives", "lr0", "min_count", "nmin", "nmax", "buckets", "subsample",
                  "threads"},
                 "embedding");
      auto& p = c.embedding;
      p.dim = e.value("dim", p.dim);
      p.window = e.value("window", p.window);
      p.epochs = e.value("epochs", p.epochs);
      p.negatives = e.value("negatives", p.negatives);
      p.lr0 = e.value("lr0", p.lr0);
      p.min_count = e.value("min_count", p.min_count);
      p.nmin = e.value("nmin", p.nmin);
      p.nmax = e.value("nmax", p.nmax);
      p.buckets = e.value("buckets", p.buckets);
      p.subsample = e.value("subsample", p.subsample);
      p.threads = e.value("threads", p.threads);
    }
    if (j.contains("semantic")) {
      const auto& s = j.at("semantic");
      check_keys(s, {"bootstrap", "min_count", "max_words", "bootstrap_threads"}, "semantic");
      c.bootstrap = s.value("bootstrap", c.bootstrap);
      c.semantic_min_count = s.value("min_count", c.semantic_min_count);
      c.semantic_max_words = s.value("max_words", c.semantic_max_words);
      c.bootstrap_threads = s.value("bootstrap_threads", c.bootstrap_threads);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("report", std::string("config: ") + e.what());
  }
  c.embedding.seed = c.seed;
  return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(detail::read_file(path, "report"));
  } catch (const nlohmann::json::exception& e) {
    throw Error("report", path.string() + ": malformed config (" + e.what() + ")");
  }
  return parse_config(j, path.parent_path());
}

/// Checks the whole config, including that every referenced file exists, so
/// a bad path fails before any computation starts.
inline void validate_config(const PipelineConfig& c) {
  const auto fail = [](const std::string& m) { throw Error("report", "config: " + m); };
  if (c.corpora.size() < 2) fail("at least 2 corpora are required");
  std::set<std::string> seen;
  for (const auto& in : c.corpora) {
    if (in.name.empty()) fail("corpus with an empty name");
    if (!seen.insert(in.name).second) fail("duplicate corpus name '" + in.name + "'");
    if (in.manifest.empty()) fail("corpus '" + in.name + "' has no manifest");
    if (!std::filesystem::exists(c.resolve(in.manifest))) {
      fail("corpus '" + in.name + "': manifest not found: " + c.resolve(in.manifest).string());
    }
    if (!in.conllu.empty() && !std::filesystem::exists(c.resolve(in.conllu))) {
      fail("corpus '" + in.name + "': CoNLL-U file not found: " + c.resolve(in.conllu).string());
    }
  }
  if (!c.find(c.reference)) fail("reference corpus '" + c.reference + "' is not listed");
  if (!c.find(c.focus)) fail("focus corpus '" + c.focus + "' is not listed");
  if (c.reference == c.focus) fail("reference and focus must differ");
  if (!c.stopwords.empty() && !std::filesystem::exists(c.resolve(c.stopwords))) {
    fail("stopword list not found: " + c.resolve(c.stopwords).string());
  }
  if (!c.lexicon.empty() && !std::filesystem::exists(c.resolve(c.lexicon))) {
    fail("lexicon not found: " + c.resolve(c.lexicon).string());
  }
  if (c.top_n < 1) fail("top_words.n must be >= 1");
  if (c.bootstrap < 1) fail("semantic.bootstrap must be >= 1");
  if (c.jobs < 1 || c.bootstrap_threads < 1) fail("thread counts must be >= 1");
  try {
    c.embedding.validate();
  } catch (const Error& e) {
    fail("embedding: " + e.message());
  }
}

// ---------------------------------------------------------------- report --

struct CorpusSummary {
  std::string name;
  CorpusCounts counts;
  double median_word_length = 0.0;
  double median_sentence_length = 0.0;

  bool operator==(const CorpusSummary&) const = default;
};

struct FrequencySection {
  std::string reference;
  std::string other;
  FreqComparison comparison;
  PairedVectors scatter;  // all words, union vocabulary

  bool operator==(const FrequencySection&) const = default;
};

struct TopWordsSection {
  std::string reference;
  std::string focus;
  std::size_t long_min_letters = 0;
  std::vector<WordCount> top_reference;
  std::vector<WordCount> top_focus;
  std::vector<WordCount> long_reference;
  std::vector<WordCount> long_focus;
  std::vector<SharedWordRow> shared;
  SharedTypeStats types_all;
  SharedTypeStats types_content;

  bool operator==(const TopWordsSection&) const = default;
};

struct PosSection {
  std::string reference;
  std::string focus;
  std::string tags_reference;  // "conllu" or "baseline"
  std::string tags_focus;
  PosDistribution dist_reference;
  PosDistribution dist_focus;
  std::vector<PosDiffRow> rows;
  double diff_sum = 0.0;

  bool operator==(const PosSection&) const = default;
};

struct SemanticSection {
  std::string reference;
  std::string other;
  std::size_t n_words = 0;
  std::size_t n_pairs = 0;
  double loss_reference = 0.0;
  double loss_other = 0.0;
  BootstrapResult bootstrap;

  bool operator==(const SemanticSection&) const = default;
};

struct Provenance {
  std::string tool_version;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::map<std::string, std::string> input_hashes;  // role -> FNV-1a 64 hex
  std::vector<std::string> notes;

  bool operator==(const Provenance&) const = default;
};

struct AnalysisReport {
  int schema_version = kReportSchemaVersion;
  std::vector<CorpusSummary> corpora;
  std::map<std::string, LengthDistributions> lengths;
  std::vector<FrequencySection> frequencies;
  std::optional<TopWordsSection> top_words;
  std::optional<PosSection> pos;
  std::vector<SemanticSection> semantic;
  Provenance provenance;

  const CorpusSummary* summary(const std::string& name) const {
    for (const auto& s : corpora) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  bool operator==(const AnalysisReport&) const = default;
};

// ------------------------------------------------------------------ json --

inline void to_json(nlohmann::json& j, const Upos& t) { j = std::string(to_string(t)); }
inline void from_json(const nlohmann::json& j, Upos& t) { t = require_upos(j.get<std::string>(), "report json: "); }

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CorpusCounts, n_texts, n_tokens, n_types, avg_tokens_per_text, log_ttr)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LengthDistribution, histogram, median, outlier_threshold, n_outliers_excluded)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LengthDistributions, word, sentence)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(WordCount, word, count)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SharedWordRow, word, count_a, count_b, total)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SharedTypeStats, n_a, n_b, n_shared, n_union, pct_shared, pct_of_a, pct_of_b)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FreqComparison, r_all, r_shared, r_no_function_words, n_all, n_shared,
                                   n_no_function_words)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PairedVectors, vocab, a, b)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PosDistribution, percent, n_tagged_tokens)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PosDiffRow, tag, pct_a, pct_b, diff)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BootstrapResult, point_r, replicate_rs, ci_low, ci_high, mean_r, replicates, seed,
                                   retries)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CorpusSummary, name, counts, median_word_length, median_sentence_length)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FrequencySection, reference, other, comparison, scatter)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TopWordsSection, reference, focus, long_min_letters, top_reference, top_focus, long_reference,
                                   long_focus, shared, types_all, types_content)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PosSection, reference, focus, tags_reference, tags_focus, dist_reference,
                                   dist_focus, rows, diff_sum)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SemanticSection, reference, other, n_words, n_pairs, loss_reference, loss_other,
                                   bootstrap)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Provenance, tool_version, seed, config, input_hashes, notes)

inline void to_json(nlohmann::json& j, const AnalysisReport& r) {
  j = nlohmann::json{{"schema_version", r.schema_version},
                     {"corpora", r.corpora},
                     {"lengths", r.lengths},
                     {"frequencies", r.frequencies},
                     {"top_words", nullptr},
                     {"pos", nullptr},
                     {"semantic", r.semantic},
                     {"provenance", r.provenance}};
  if (r.top_words) j["top_words"] = *r.top_words;
  if (r.pos) j["pos"] = *r.pos;
}

inline void from_json(const nlohmann::json& j, AnalysisReport& r) {
  j.at("schema_version").get_to(r.schema_version);
  if (r.schema_version != kReportSchemaVersion) {
    throw Error("report", "unsupported report schema version " + std::to_string(r.schema_version));
  }
  j.at("corpora").get_to(r.corpora);
  j.at("lengths").get_to(r.lengths);
  j.at("frequencies").get_to(r.frequencies);
  r.top_words.reset();
  r.pos.reset();
  if (!j.at("top_words").is_null()) r.top_words = j.at("top_words").get<TopWordsSection>();
  if (!j.at("pos").is_null()) r.pos = j.at("pos").get<PosSection>();
  j.at("semantic").get_to(r.semantic);
  j.at("provenance").get_to(r.provenance);
}

inline std::string render_json(const AnalysisReport& r) { return nlohmann::json(r).dump(2) + "\n"; }

inline AnalysisReport parse_report(std::string_view text) {
  try {
    return nlohmann::json::parse(text).get<AnalysisReport>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("report", std::string("malformed report JSON: ") + e.what());
  }
}

// -------------------------------------------------------------- pipeline --

namespace detail {

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Runs f(0..n-1) on up to `jobs` threads; the first exception is rethrown.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& f) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += jobs) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Re-raises module errors with the failing input named.
template <class F>
auto with_input(const std::string& input, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.module(), input + ": " + e.message());
  }
}

inline std::vector<std::string> cap_words(std::vector<std::string> words, const WordVectors& a, const WordVectors& b,
                                          std::size_t max_words) {
  if (max_words == 0 || words.size() <= max_words) return words;
  std::vector<std::pair<std::uint64_t, std::string>> ranked;
  for (auto& w : words) ranked.emplace_back(a.count(*a.find(w)) + b.count(*b.find(w)), std::move(w));
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& x, const auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
  ranked.resize(max_words);
  std::vector<std::string> out;
  for (auto& [c, w] : ranked) out.push_back(std::move(w));
  return out;
}

}  // namespace detail

inline AnalysisReport run_pipeline(const PipelineConfig& cfg) {
  validate_config(cfg);
  AnalysisReport report;
  auto& prov = report.provenance;
  prov.tool_version = std::string(kToolVersion);
  prov.seed = cfg.seed;
  prov.config = normalized_config(cfg);

  const auto hash_file = [&](const std::string& role, const std::filesystem::path& p) {
    prov.input_hashes[role] = detail::hex64(fnv1a64(detail::read_file(p, "report")));
  };
  WordSet stops = default_german_stopwords();
  if (!cfg.stopwords.empty()) {
    stops = detail::with_input(cfg.stopwords, [&] { return load_stopwords(cfg.resolve(cfg.stopwords)); });
    hash_file("stopwords", cfg.resolve(cfg.stopwords));
  }
  const WordSet names(cfg.names);

  const std::size_t n = cfg.corpora.size();
  std::vector<TokenizedCorpus> tokenized(n);
  detail::parallel_for(n, cfg.jobs, [&](std::size_t i) {
    const auto& in = cfg.corpora[i];
    auto corpus = load_corpus(cfg.resolve(in.manifest));
    corpus.name = in.name;
    tokenized[i] = detail::with_input(in.name, [&] { return tokenize_corpus(corpus); });
  });
  for (const auto& in : cfg.corpora) hash_file(in.name + ".manifest", cfg.resolve(in.manifest));

  std::size_t ref = 0;
  std::size_t focus = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cfg.corpora[i].name == cfg.reference) ref = i;
    if (cfg.corpora[i].name == cfg.focus) focus = i;
  }
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != ref) others.push_back(i);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& tc = tokenized[i];
    CorpusSummary s;
    s.name = tc.name;
    s.counts = detail::with_input(tc.name, [&] { return corpus_counts(tc); });
    auto lengths = detail::with_input(tc.name, [&] { return length_distributions(tc, cfg.sentence_outlier_cap); });
    s.median_word_length = lengths.word.median;
    s.median_sentence_length = lengths.sentence.median;
    report.corpora.push_back(s);
    report.lengths[tc.name] = std::move(lengths);
  }

  if (cfg.analyses.frequencies) {
    report.frequencies.resize(others.size());
    detail::parallel_for(others.size(), cfg.jobs, [&](std::size_t k) {
      const auto& a = tokenized[ref];
      const auto& b = tokenized[others[k]];
      const std::string label = a.name + " vs " + b.name;
      auto& sec = report.frequencies[k];
      sec.reference = a.name;
      sec.other = b.name;
      sec.comparison = detail::with_input(label, [&] { return compare_frequencies(a, b, stops, names); });
      sec.scatter = detail::with_input(label, [&] {
        return log_smoothed_vectors(frequency_table(a, FreqFilter::words_only),
                                    frequency_table(b, FreqFilter::words_only), VocabMode::union_vocab);
      });
    });
  }

  if (cfg.analyses.top_words) {
    const auto& a = tokenized[ref];
    const auto& b = tokenized[focus];
    TokenFilter content{stops, names, 0};
    TokenFilter long_words{stops, names, cfg.long_min_letters};
    TopWordsSection t;
    t.reference = a.name;
    t.focus = b.name;
    t.long_min_letters = cfg.long_min_letters;
    detail::with_input(a.name + " vs " + b.name, [&] {
      t.top_reference = top_words(a, cfg.top_n, content);
      t.top_focus = top_words(b, cfg.top_n, content);
      t.long_reference = top_words(a, cfg.top_n, long_words);
      t.long_focus = top_words(b, cfg.top_n, long_words);
      t.shared = shared_top_words(a, b, cfg.top_n, content);
      t.types_all = shared_type_stats(a, b);
      t.types_content = shared_type_stats(a, b, content);
    });
    report.top_words = std::move(t);
  }

  if (cfg.analyses.pos) {
    std::optional<Lexicon> lexicon;
    if (!cfg.lexicon.empty()) {
      lexicon = detail::with_input(cfg.lexicon, [&] { return load_lexicon(cfg.resolve(cfg.lexicon)); });
      hash_file("lexicon", cfg.resolve(cfg.lexicon));
    }
    const auto tags_for = [&](std::size_t i, std::string& origin) -> std::optional<TaggedCorpus> {
      const auto& in = cfg.corpora[i];
      if (!in.conllu.empty()) {
        origin = "conllu";
        hash_file(in.name + ".conllu", cfg.resolve(in.conllu));
        return load_conllu(cfg.resolve(in.conllu));
      }
      if (lexicon) {
        origin = "baseline";
        return baseline_tag(tokenized[i], *lexicon);
      }
      return std::nullopt;
    };
    PosSection p;
    p.reference = tokenized[ref].name;
    p.focus = tokenized[focus].name;
    const auto ta = tags_for(ref, p.tags_reference);
    const auto tb = tags_for(focus, p.tags_focus);
    if (ta && tb) {
      detail::with_input(p.reference + " vs " + p.focus, [&] {
        p.dist_reference = pos_distribution(*ta);
        p.dist_focus = pos_distribution(*tb);
        p.rows = pos_diff(p.dist_reference, p.dist_focus);
      });
      for (const auto& r : p.rows) p.diff_sum += r.diff;
      report.pos = std::move(p);
      prov.notes.push_back("POS: PROPN counted as NOUN; PUNCT, X, SYM, INTJ excluded");
    } else {
      prov.notes.push_back("POS: skipped, no CoNLL-U input or lexicon for " + p.reference + " and " + p.focus);
    }
  }

  if (cfg.analyses.semantic) {
    std::vector<std::optional<EmbeddingModel<float>>> models(n);
    std::vector<std::size_t> wanted{ref};
    wanted.insert(wanted.end(), others.begin(), others.end());
    detail::parallel_for(wanted.size(), cfg.jobs, [&](std::size_t k) {
      const std::size_t i = wanted[k];
      models[i] = detail::with_input(tokenized[i].name, [&] { return train_skipgram<float>(tokenized[i], cfg.embedding); });
    });
    const auto& ma = *models[ref];
    const auto va = ma.to_word_vectors();
    for (std::size_t i : others) {
      const auto& mb = *models[i];
      const auto vb = mb.to_word_vectors();
      SemanticSection s;
      s.reference = tokenized[ref].name;
      s.other = tokenized[i].name;
      detail::with_input(s.reference + " vs " + s.other, [&] {
        auto words = detail::cap_words(shared_vocabulary(va, vb, stops, names, cfg.semantic_min_count), va, vb,
                                       cfg.semantic_max_words);
        const auto pa = similarity_profile(ma, words, s.reference);
        const auto pb = similarity_profile(mb, words, s.other);
        s.n_words = pa.words.size();
        s.n_pairs = pa.sims.size();
        s.bootstrap = bootstrap_r(pa, pb, cfg.bootstrap, cfg.seed, cfg.bootstrap_threads);
      });
      s.loss_reference = ma.mean_loss();
      s.loss_other = mb.mean_loss();
      report.semantic.push_back(std::move(s));
    }
    prov.notes.push_back("semantic: bootstrap over word pairs, percentile 95% interval");
  }
  prov.notes.push_back("text layer: " + cfg.text_layer);
  return report;
}

/// Rebuilds the config recorded in a report's provenance block.
inline PipelineConfig config_from_provenance(const AnalysisReport& r, std::filesystem::path base_dir) {
  return parse_config(r.provenance.config, std::move(base_dir));
}

// ------------------------------------------------------------- rendering --

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

class MarkdownTable {
 public:
  MarkdownTable(std::vector<std::string> header, std::vector<bool> right_aligned)
      : header_(std::move(header)), right_(std::move(right_aligned)) {}

  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  void write(std::ostream& out) const {
    const auto line = [&](const std::vector<std::string>& cells) {
      out << '|';
      for (const auto& c : cells) out << ' ' << c << " |";
      out << '\n';
    };
    line(header_);
    out << '|';
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i < right_.size() && right_[i] ? "---:|" : "---|");
    out << '\n';
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> header_;
  std::vector<bool> right_;
  std::vector<std::vector<std::string>> rows_;
};

inline const FrequencySection* frequency_for(const AnalysisReport& r, const std::string& other) {
  for (const auto& f : r.frequencies) {
    if (f.other == other) return &f;
  }
  return nullptr;
}

}  // namespace detail

inline std::string render_markdown(const AnalysisReport& r) {
  std::ostringstream out;
  out << "# Corpus comparison report\n\n";

  out << "## Table 1. Corpus overview\n\n";
  std::vector<std::string> header{"Measure"};
  for (const auto& c : r.corpora) header.push_back(c.name);
  detail::MarkdownTable t1(header, std::vector<bool>(header.size(), true));
  const auto metric = [&](const std::string& label, const std::function<std::string(const CorpusSummary&)>& cell) {
    std::vector<std::string> row{label};
    for (const auto& c : r.corpora) row.push_back(cell(c));
    t1.row(std::move(row));
  };
  metric("Total texts", [](const CorpusSummary& c) { return std::to_string(c.counts.n_texts); });
  metric("Total tokens", [](const CorpusSummary& c) { return std::to_string(c.counts.n_tokens); });
  metric("Tokens per text", [](const CorpusSummary& c) { return detail::fixed(c.counts.avg_tokens_per_text, 2); });
  metric("Types", [](const CorpusSummary& c) { return std::to_string(c.counts.n_types); });
  metric("log TTR", [](const CorpusSummary& c) { return detail::fixed(c.counts.log_ttr, 3); });
  metric("Median word length", [](const CorpusSummary& c) { return detail::fixed(c.median_word_length, 1); });
  metric("Median sentence length", [](const CorpusSummary& c) { return detail::fixed(c.median_sentence_length, 1); });
  if (!r.frequencies.empty()) {
    const std::string& ref = r.frequencies.front().reference;
    const auto freq_row = [&](const std::string& label, double FreqComparison::*field) {
      metric(label + " with " + ref, [&](const CorpusSummary& c) {
        const auto* f = detail::frequency_for(r, c.name);
        return f ? detail::fixed(f->comparison.*field, 2) : std::string("-");
      });
    };
    freq_row("r log-frequency, all words,", &FreqComparison::r_all);
    freq_row("r log-frequency, shared words,", &FreqComparison::r_shared);
    freq_row("r log-frequency, no function words,", &FreqComparison::r_no_function_words);
  }
  t1.write(out);
  out << '\n';

  if (r.top_words) {
    const auto& t = *r.top_words;
    out << "## Table 2. Most frequent content words\n\n";
    const std::string longest = ">= " + std::to_string(t.long_min_letters) + " letters";
    detail::MarkdownTable t2({"Rank", t.reference, "n", t.focus, "n", t.reference + " " + longest, "n",
                              t.focus + " " + longest, "n"},
                             {true, false, true, false, true, false, true, false, true});
    const std::size_t rows = std::max({t.top_reference.size(), t.top_focus.size(), t.long_reference.size(),
                                       t.long_focus.size()});
    const auto cells = [](const std::vector<WordCount>& v, std::size_t i, std::vector<std::string>& row) {
      row.push_back(i < v.size() ? v[i].word : "");
      row.push_back(i < v.size() ? std::to_string(v[i].count) : "");
    };
    for (std::size_t i = 0; i < rows; ++i) {
      std::vector<std::string> row{std::to_string(i + 1)};
      cells(t.top_reference, i, row);
      cells(t.top_focus, i, row);
      cells(t.long_reference, i, row);
      cells(t.long_focus, i, row);
      t2.row(std::move(row));
    }
    t2.write(out);
    out << '\n';

    out << "## Table 3. Most frequent shared content words\n\n";
    detail::MarkdownTable t3({"Word", t.reference, t.focus, "Total"}, {false, true, true, true});
    for (const auto& s : t.shared) {
      t3.row({s.word, std::to_string(s.count_a), std::to_string(s.count_b), std::to_string(s.total)});
    }
    t3.write(out);
    out << '\n';
    const auto types_line = [&](const char* label, const SharedTypeStats& s) {
      out << "- " << label << ": " << s.n_shared << " shared of " << s.n_union << " types ("
          << detail::fixed(s.pct_shared, 2) << "% of the union, " << detail::fixed(s.pct_of_a, 2) << "% of "
          << t.reference << ", " << detail::fixed(s.pct_of_b, 2) << "% of " << t.focus << ")\n";
    };
    types_line("All word types", t.types_all);
    types_line("Content word types", t.types_content);
    out << '\n';
  }

  if (r.pos) {
    const auto& p = *r.pos;
    out << "## Table 4. Part-of-speech distribution (%)\n\n";
    detail::MarkdownTable t4({"UPOS", p.reference, p.focus, "Difference"}, {false, true, true, true});
    for (const auto& row : p.rows) {
      t4.row({std::string(to_string(row.tag)), detail::fixed(row.pct_a, 2), detail::fixed(row.pct_b, 2),
              detail::fixed(row.diff, 2)});
    }
    t4.write(out);
    out << "\nTagged tokens: " << p.dist_reference.n_tagged_tokens << " (" << p.reference << ", "
        << p.tags_reference << "), " << p.dist_focus.n_tagged_tokens << " (" << p.focus << ", " << p.tags_focus
        << "). Sum of differences: " << detail::fixed(p.diff_sum, 4) << ".\n\n";
  }

  if (!r.semantic.empty()) {
    out << "## Semantic similarity\n\n";
    for (const auto& s : r.semantic) {
      const auto& b = s.bootstrap;
      out << "- " << s.reference << " vs " << s.other << ": second-order r = " << detail::fixed(b.point_r, 4)
          << ", bootstrap mean " << detail::fixed(b.mean_r, 4) << ", 95% CI [" << detail::fixed(b.ci_low, 4) << ", "
          << detail::fixed(b.ci_high, 4) << "] (B = " << b.replicates << ", " << s.n_words << " words, "
          << s.n_pairs << " pairs)\n";
    }
    out << '\n';
  }

  out << "## Provenance\n\n";
  out << "- Tool version: " << r.provenance.tool_version << "\n- Seed: " << r.provenance.seed << '\n';
  for (const auto& [role, h] : r.provenance.input_hashes) out << "- Input " << role << ": fnv1a64 " << h << '\n';
  for (const auto& note : r.provenance.notes) out << "- " << note << '\n';
  return out.str();
}

/// File name -> contents, one TSV per table and figure.
inline std::map<std::string, std::string> render_tsv_bundle(const AnalysisReport& r) {
  std::map<std::string, std::string> files;
  {
    std::ostringstream o;
    o.precision(17);
    o << "corpus\tn_texts\tn_tokens\tavg_tokens_per_text\tn_types\tlog_ttr\tmedian_word_length\t"
         "median_sentence_length\tr_all\tr_shared\tr_no_function_words\n";
    for (const auto& c : r.corpora) {
      o << c.name << '\t' << c.counts.n_texts << '\t' << c.counts.n_tokens << '\t' << c.counts.avg_tokens_per_text
        << '\t' << c.counts.n_types << '\t' << c.counts.log_ttr << '\t' << c.median_word_length << '\t'
        << c.median_sentence_length;
      if (const auto* f = detail::frequency_for(r, c.name)) {
        o << '\t' << f->comparison.r_all << '\t' << f->comparison.r_shared << '\t' << f->comparison.r_no_function_words;
      } else {
        o << "\t\t\t";
      }
      o << '\n';
    }
    files["table1_corpora.tsv"] = o.str();
  }
  if (r.top_words) {
    const auto& t = *r.top_words;
    std::ostringstream o;
    o << "list\tcorpus\trank\tword\tcount\n";
    const auto list = [&](const char* kind, const std::string& corpus, const std::vector<WordCount>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        o << kind << '\t' << corpus << '\t' << i + 1 << '\t' << v[i].word << '\t' << v[i].count << '\n';
      }
    };
    list("top", t.reference, t.top_reference);
    list("top", t.focus, t.top_focus);
    list("long", t.reference, t.long_reference);
    list("long", t.focus, t.long_focus);
    files["table2_top_words.tsv"] = o.str();
    std::ostringstream s;
    s << "word\tcount_a\tcount_b\ttotal\n";
    for (const auto& row : t.shared) {
      s << row.word << '\t' << row.count_a << '\t' << row.count_b << '\t' << row.total << '\n';
    }
    files["table3_shared_words.tsv"] = s.str();
  }
  if (r.pos) {
    std::ostringstream o;
    write_pos_tsv(o, r.pos->rows);
    files["table4_pos.tsv"] = o.str();
  }
  for (const auto& f : r.frequencies) {
    std::ostringstream o;
    write_scatter_tsv(o, f.scatter);
    files["fig2_" + f.reference + "_" + f.other + ".tsv"] = o.str();
  }
  {
    std::ostringstream o;
    o << "corpus\tkind\tlength\tcount\n";
    for (const auto& [name, d] : r.lengths) {
      for (const auto& [len, c] : d.word.histogram) o << name << "\tword\t" << len << '\t' << c << '\n';
      for (const auto& [len, c] : d.sentence.histogram) o << name << "\tsentence\t" << len << '\t' << c << '\n';
    }
    files["fig3_lengths.tsv"] = o.str();
  }
  for (const auto& s : r.semantic) {
    std::ostringstream o;
    o.precision(17);
    o << "replicate\tr\n";
    for (std::size_t k = 0; k < s.bootstrap.replicate_rs.size(); ++k) o << k << '\t' << s.bootstrap.replicate_rs[k] << '\n';
    files["fig4_" + s.reference + "_" + s.other + ".tsv"] = o.str();
  }
  return files;
}

enum class ReportFormat { markdown, json, tsv_bundle };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  if (s == "json") return ReportFormat::json;
  if (s == "tsv-bundle" || s == "tsv") return ReportFormat::tsv_bundle;
  throw Error("report", "unknown report format '" + std::string(s) + "'");
}

namespace detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("report", "cannot write " + path.string());
  out << text;
  if (!out) throw Error("report", "write failed: " + path.string());
}

}  // namespace detail

/// Markdown and JSON go to `path`; a TSV bundle goes into directory `path`.
inline void write_report(const AnalysisReport& r, ReportFormat format, const std::filesystem::path& path) {
  switch (format) {
    case ReportFormat::markdown:
      detail::write_text_file(path, render_markdown(r));
      break;
    case ReportFormat::json:
      detail::write_text_file(path, render_json(r));
      break;
    case ReportFormat::tsv_bundle: {
      std::error_code ec;
      std::filesystem::create_directories(path, ec);
      if (ec || !std::filesystem::is_directory(path)) throw Error("report", "cannot create directory " + path.string());
      for (const auto& [name, text] : render_tsv_bundle(r)) detail::write_text_file(path / name, text);
      break;
    }
  }
}

}  // namespace corpuslens

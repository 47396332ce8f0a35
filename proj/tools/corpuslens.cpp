// corpuslens command-line front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corpuslens/corpus.hpp"
#include "corpuslens/embed.hpp"
#include "corpuslens/freqcomp.hpp"
#include "corpuslens/lexstats.hpp"
#include "corpuslens/llmgen.hpp"
#include "corpuslens/postag.hpp"
#include "corpuslens/report.hpp"
#include "corpuslens/semsim.hpp"
#include "corpuslens/tokenize.hpp"

namespace cl = corpuslens;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string stopwords;
  std::vector<std::string> names;
  std::string format = "markdown";

  cl::WordSet stopword_set() const {
    return stopwords.empty() ? cl::default_german_stopwords() : cl::load_stopwords(stopwords);
  }
  cl::WordSet name_set() const { return names.empty() ? cl::default_character_names() : cl::WordSet(names); }
};

/// Renders rows either as a Markdown table, TSV, or a JSON array of objects.
std::string render_rows(const std::string& format, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json o = nlohmann::json::object();
      for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
      arr.push_back(o);
    }
    out << arr.dump(2) << '\n';
  } else if (format == "tsv" || format == "tsv-bundle") {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "\t" : "") << header[i];
    out << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "\t" : "") << r[i];
      out << '\n';
    }
  } else {
    cl::detail::MarkdownTable t(header, std::vector<bool>(header.size(), false));
    for (const auto& r : rows) t.row(r);
    t.write(out);
  }
  return out.str();
}

std::string num(double v, int decimals = 4) { return cl::detail::fixed(v, decimals); }

int cmd_run(const Globals& g, const std::string& config, const std::string& output, std::size_t jobs,
            std::size_t bootstrap_threads) {
  auto cfg = cl::load_config(config);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.embedding.seed = *g.seed;
  }
  if (!g.stopwords.empty()) cfg.stopwords = std::filesystem::absolute(g.stopwords).string();
  if (!g.names.empty()) cfg.names = g.names;
  cfg.jobs = jobs;
  cfg.bootstrap_threads = bootstrap_threads;
  const auto report = cl::run_pipeline(cfg);
  const auto format = cl::parse_report_format(g.format);
  if (format == cl::ReportFormat::tsv_bundle) {
    if (output.empty()) throw cl::Error("cli", "--format tsv-bundle needs -o <directory>");
    cl::write_report(report, format, output);
  } else if (output.empty()) {
    std::cout << (format == cl::ReportFormat::json ? cl::render_json(report) : cl::render_markdown(report));
  } else {
    cl::write_report(report, format, output);
  }
  return 0;
}

int cmd_stats(const Globals& g, const std::vector<std::string>& corpora, std::size_t cap) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& path : corpora) {
    const auto tc = cl::tokenize_corpus(cl::load_corpus(path));
    const auto c = cl::corpus_counts(tc);
    const auto l = cl::length_distributions(tc, cap);
    rows.push_back({tc.name, std::to_string(c.n_texts), std::to_string(c.n_tokens), num(c.avg_tokens_per_text, 2),
                    std::to_string(c.n_types), num(c.log_ttr, 3), num(l.word.median, 1), num(l.sentence.median, 1),
                    std::to_string(l.sentence.n_outliers_excluded)});
  }
  std::cout << render_rows(g.format,
                           {"corpus", "texts", "tokens", "tokens_per_text", "types", "log_ttr", "median_word_length",
                            "median_sentence_length", "sentence_outliers"},
                           rows);
  return 0;
}

int cmd_freq(const Globals& g, const std::string& a, const std::string& b, const std::string& scatter) {
  const auto ta = cl::tokenize_corpus(cl::load_corpus(a));
  const auto tb = cl::tokenize_corpus(cl::load_corpus(b));
  const auto c = cl::compare_frequencies(ta, tb, g.stopword_set(), g.name_set());
  std::cout << render_rows(g.format, {"vocabulary", "r", "n_words"},
                           {{"all", num(c.r_all), std::to_string(c.n_all)},
                            {"shared", num(c.r_shared), std::to_string(c.n_shared)},
                            {"no_function_words", num(c.r_no_function_words), std::to_string(c.n_no_function_words)}});
  if (!scatter.empty()) {
    std::ofstream out(scatter, std::ios::binary);
    if (!out) throw cl::Error("cli", "cannot write " + scatter);
    cl::write_scatter_tsv(out, cl::log_smoothed_vectors(cl::frequency_table(ta, cl::FreqFilter::words_only),
                                                        cl::frequency_table(tb, cl::FreqFilter::words_only),
                                                        cl::VocabMode::union_vocab));
  }
  return 0;
}

int cmd_pos(const Globals& g, const std::string& a, const std::string& b) {
  const auto rows = cl::pos_diff(cl::pos_distribution(cl::load_conllu(a)), cl::pos_distribution(cl::load_conllu(b)));
  std::vector<std::vector<std::string>> out;
  double sum = 0.0;
  for (const auto& r : rows) {
    out.push_back({std::string(cl::to_string(r.tag)), num(r.pct_a, 2), num(r.pct_b, 2), num(r.diff, 2)});
    sum += r.diff;
  }
  std::cout << render_rows(g.format, {"tag", "pct_a", "pct_b", "diff"}, out);
  if (g.format == "markdown") std::cout << "\nSum of differences: " << num(sum, 4) << '\n';
  return 0;
}

int cmd_embed_train(const Globals& g, const std::string& corpus, const std::string& output, cl::EmbedParams params) {
  if (g.seed) params.seed = *g.seed;
  const auto model = cl::train_skipgram<float>(cl::tokenize_corpus(cl::load_corpus(corpus)), params);
  cl::save_vectors(output, model);
  std::cerr << "trained " << model.vocab().size() << " words, dim " << model.dim() << ", mean loss "
            << num(model.mean_loss()) << '\n';
  return 0;
}

int cmd_semsim(const Globals& g, const std::string& a, const std::string& b, std::size_t replicates,
               std::size_t threads, std::size_t min_count, const std::string& profile) {
  const auto va = cl::load_vectors(a);
  const auto vb = cl::load_vectors(b);
  const auto words = cl::shared_vocabulary(va, vb, g.stopword_set(), g.name_set(), min_count);
  const auto pa = cl::similarity_profile(va, words, a, threads);
  const auto pb = cl::similarity_profile(vb, words, b, threads);
  const auto boot = cl::bootstrap_r(pa, pb, replicates, g.seed.value_or(1), threads);
  std::cout << render_rows(g.format, {"words", "pairs", "r", "bootstrap_mean", "ci_low", "ci_high", "replicates"},
                           {{std::to_string(words.size()), std::to_string(pa.sims.size()), num(boot.point_r),
                             num(boot.mean_r), num(boot.ci_low), num(boot.ci_high), std::to_string(boot.replicates)}});
  if (!profile.empty()) {
    std::ofstream out(profile, std::ios::binary);
    if (!out) throw cl::Error("cli", "cannot write " + profile);
    cl::write_profile_tsv(out, pa, pb);
  }
  return 0;
}

int cmd_generate(const Globals& g, const std::string& plan_path, const std::string& dry_run) {
  auto plan = cl::load_plan(plan_path);
  if (g.seed) plan.seed = *g.seed;
  if (!dry_run.empty()) {
    std::ofstream out(dry_run, std::ios::binary);
    if (!out) throw cl::Error("cli", "cannot write " + dry_run);
    cl::write_dry_run(out, plan);
    return 0;
  }
  const auto result = cl::generate_corpus(plan);
  for (const auto& f : result.failures) std::cerr << "failed " << f.doc_id << ": " << f.message << '\n';
  std::cerr << "documents: " << result.corpus.documents.size() << " (" << result.generated << " new, "
            << result.resumed << " resumed, " << result.failures.size() << " failed)\n";
  if (plan.output.empty()) cl::write_manifest(std::cout, result.corpus);
  return result.failures.empty() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpuslens: compare child-written and LLM-generated text corpora"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (overrides config)");
  app.add_option("--stopwords", g.stopwords, "Stopword list, one word per line");
  app.add_option("--names", g.names, "Character names to exclude")->delimiter(',');
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"markdown", "json", "tsv", "tsv-bundle"}));

  auto* run = app.add_subcommand("run", "Run the full analysis pipeline from a config file");
  std::string config;
  std::string run_out;
  std::size_t jobs = 1;
  std::size_t bootstrap_threads = 1;
  run->add_option("config", config, "Pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", run_out, "Output file (directory for tsv-bundle)");
  run->add_option("--jobs", jobs, "Parallel analyses")->check(CLI::PositiveNumber);
  run->add_option("--bootstrap-threads", bootstrap_threads, "Bootstrap worker threads")->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "Corpus size, lexical richness and length statistics");
  std::vector<std::string> stat_corpora;
  std::size_t cap = 100;
  stats->add_option("corpus", stat_corpora, "Corpus manifests (JSONL)")->required()->check(CLI::ExistingFile);
  stats->add_option("--sentence-cap", cap, "Sentence length outlier cap (0: none)");

  auto* freq = app.add_subcommand("freq", "Log-frequency correlations between two corpora");
  std::string fa;
  std::string fb;
  std::string scatter;
  freq->add_option("a", fa)->required()->check(CLI::ExistingFile);
  freq->add_option("b", fb)->required()->check(CLI::ExistingFile);
  freq->add_option("--scatter", scatter, "Write scatter data TSV");

  auto* pos = app.add_subcommand("pos", "Compare UPOS distributions of two CoNLL-U files");
  std::string pa;
  std::string pb;
  pos->add_option("a", pa)->required()->check(CLI::ExistingFile);
  pos->add_option("b", pb)->required()->check(CLI::ExistingFile);

  auto* embed = app.add_subcommand("embed", "Subword embeddings");
  embed->require_subcommand(1);
  auto* train = embed->add_subcommand("train", "Train skip-gram vectors on a corpus");
  std::string train_corpus;
  std::string vecs_out;
  cl::EmbedParams params;
  train->add_option("corpus", train_corpus)->required()->check(CLI::ExistingFile);
  train->add_option("-o,--output", vecs_out, "Vector file")->required();
  train->add_option("--dim", params.dim);
  train->add_option("--window", params.window);
  train->add_option("--epochs", params.epochs);
  train->add_option("--negatives", params.negatives);
  train->add_option("--lr", params.lr0);
  train->add_option("--min-count", params.min_count);
  train->add_option("--minn", params.nmin);
  train->add_option("--maxn", params.nmax);
  train->add_option("--buckets", params.buckets);
  train->add_option("--subsample", params.subsample);
  train->add_option("--threads", params.threads);

  auto* semsim = app.add_subcommand("semsim", "Second-order similarity of two vector files");
  std::string sa;
  std::string sb;
  std::size_t replicates = 1000;
  std::size_t sem_threads = 1;
  std::size_t min_count = 1;
  std::string profile;
  semsim->add_option("a", sa)->required()->check(CLI::ExistingFile);
  semsim->add_option("b", sb)->required()->check(CLI::ExistingFile);
  semsim->add_option("--bootstrap", replicates, "Bootstrap replicates")->check(CLI::PositiveNumber);
  semsim->add_option("--threads", sem_threads)->check(CLI::PositiveNumber);
  semsim->add_option("--min-count", min_count);
  semsim->add_option("--profile", profile, "Write aligned similarity profiles TSV");

  auto* generate = app.add_subcommand("generate", "Generate an LLM corpus from a plan");
  std::string plan;
  std::string dry_run;
  generate->add_option("plan", plan)->required()->check(CLI::ExistingFile);
  generate->add_option("--dry-run", dry_run, "Write request bodies (JSONL) instead of sending them");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(g, config, run_out, jobs, bootstrap_threads);
    if (*stats) return cmd_stats(g, stat_corpora, cap);
    if (*freq) return cmd_freq(g, fa, fb, scatter);
    if (*pos) return cmd_pos(g, pa, pb);
    if (*train) return cmd_embed_train(g, train_corpus, vecs_out, params);
    if (*semsim) return cmd_semsim(g, sa, sb, replicates, sem_threads, min_count, profile);
    if (*generate) return cmd_generate(g, plan, dry_run);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

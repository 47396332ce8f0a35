// Minimal library walk-through: compare two corpus manifests.
//
//   compare_corpora data/synthetic/child.jsonl data/synthetic/llm_fs.jsonl

#include <cstdio>
#include <iostream>

#include "corpuslens/freqcomp.hpp"
#include "corpuslens/lexstats.hpp"
#include "corpuslens/tokenize.hpp"

int main(int argc, char** argv) {
  using namespace corpuslens;
  if (argc != 3) {
    std::cerr << "usage: compare_corpora <a.jsonl> <b.jsonl>\n";
    return 2;
  }
  try {
    const auto a = tokenize_corpus(load_corpus(argv[1]));
    const auto b = tokenize_corpus(load_corpus(argv[2]));
    for (const auto* tc : {&a, &b}) {
      const auto c = corpus_counts(*tc);
      std::printf("%-12s texts %zu  tokens %zu  types %zu  log-TTR %.3f\n", tc->name.c_str(), c.n_texts, c.n_tokens,
                  c.n_types, c.log_ttr);
    }
    const auto& stops = default_german_stopwords();
    const auto names = default_character_names();
    const auto r = compare_frequencies(a, b, stops, names);
    std::printf("log-frequency r: all %.3f  shared %.3f  content %.3f\n", r.r_all, r.r_shared, r.r_no_function_words);
    std::printf("\nshared content words\n");
    for (const auto& row : shared_top_words(a, b, 10, TokenFilter{stops, names, 0})) {
      std::printf("  %-16s %6zu %6zu\n", row.word.c_str(), row.count_a, row.count_b);
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}

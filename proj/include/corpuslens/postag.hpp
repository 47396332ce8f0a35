#pragma once

// Universal POS distributions. Tags come from CoNLL-U files produced by an
// external tagger, or from a lexicon-plus-heuristics baseline tagger for
// self-contained runs.

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpuslens/corpus.hpp"
#include "corpuslens/error.hpp"
#include "corpuslens/tokenize.hpp"
#include "corpuslens/utf8.hpp"

namespace corpuslens {

enum class Upos {
  ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X
};

inline constexpr std::array<std::string_view, 17> kUposNames = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

inline std::string_view to_string(Upos t) { return kUposNames[static_cast<std::size_t>(t)]; }

inline std::optional<Upos> parse_upos(std::string_view s) {
  for (std::size_t i = 0; i < kUposNames.size(); ++i) {
    if (kUposNames[i] == s) return static_cast<Upos>(i);
  }
  return std::nullopt;
}

inline Upos require_upos(std::string_view s, const std::string& where) {
  const auto t = parse_upos(s);
  if (!t) throw Error("postag", where + "unknown UPOS tag '" + std::string(s) + "'");
  return *t;
}

struct TaggedToken {
  std::string surface;
  Upos upos = Upos::X;

  bool operator==(const TaggedToken&) const = default;
};

using TaggedSentence = std::vector<TaggedToken>;

struct TaggedDocument {
  std::string id;
  std::vector<TaggedSentence> sentences;

  bool operator==(const TaggedDocument&) const = default;
};

struct TaggedCorpus {
  std::vector<TaggedDocument> documents;

  std::size_t sentence_count() const {
    std::size_t n = 0;
    for (const auto& d : documents) n += d.sentences.size();
    return n;
  }

  bool operator==(const TaggedCorpus&) const = default;
};

/// Reads ID, FORM and UPOS from CoNLL-U. "# newdoc" comments open a new
/// document; other comments, multiword ranges ("1-2") and empty nodes ("1.1")
/// are skipped.
inline TaggedCorpus parse_conllu(std::istream& in, std::string_view origin = {}) {
  TaggedCorpus tg;
  TaggedSentence current;
  const auto flush = [&] {
    if (current.empty()) return;
    if (tg.documents.empty()) tg.documents.push_back({});
    tg.documents.back().sentences.push_back(std::move(current));
    current.clear();
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where =
        (origin.empty() ? std::string() : std::string(origin) + ": ") + "line " + std::to_string(lineno) + ": ";
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      std::string_view c(line);
      c.remove_prefix(1);
      c = detail::trim(c);
      if (c == "newdoc" || c.starts_with("newdoc ")) {
        flush();
        TaggedDocument doc;
        if (const auto eq = c.find('='); eq != std::string_view::npos) {
          doc.id = std::string(detail::trim(c.substr(eq + 1)));
        }
        tg.documents.push_back(std::move(doc));
      }
      continue;
    }
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (;;) {
      const auto tab = rest.find('\t');
      cols.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (cols.size() != 10) {
      throw Error("postag", where + "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;
    current.push_back({std::string(cols[1]), require_upos(cols[3], where)});
  }
  flush();
  return tg;
}

inline TaggedCorpus load_conllu(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("postag", "cannot open " + path.string());
  return parse_conllu(in, path.string());
}

/// Writes the ID/FORM/UPOS subset; other columns are "_".
inline void write_conllu(std::ostream& out, const TaggedCorpus& tg) {
  const bool implicit_doc = tg.documents.size() == 1 && tg.documents.front().id.empty();
  for (const auto& doc : tg.documents) {
    if (!implicit_doc) out << (doc.id.empty() ? std::string("# newdoc") : "# newdoc id = " + doc.id) << '\n';
    for (const auto& s : doc.sentences) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        out << (i + 1) << '\t' << s[i].surface << "\t_\t" << to_string(s[i].upos) << "\t_\t_\t_\t_\t_\t_\n";
      }
      out << '\n';
    }
  }
}

inline void save_conllu(const std::filesystem::path& path, const TaggedCorpus& tg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("postag", "cannot write " + path.string());
  write_conllu(out, tg);
}

/// word -> UPOS lookup with an exact and a case-folded index.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const std::map<std::string, Upos>& entries) {
    for (const auto& [w, t] : entries) add(w, t);
  }

  void add(const std::string& word, Upos tag) {
    exact_.insert_or_assign(word, tag);
    folded_.try_emplace(utf8::fold(word), tag);
  }

  std::optional<Upos> lookup(const std::string& word) const {
    if (const auto it = exact_.find(word); it != exact_.end()) return it->second;
    if (const auto it = folded_.find(utf8::fold(word)); it != folded_.end()) return it->second;
    return std::nullopt;
  }

  std::size_t size() const { return exact_.size(); }
  bool empty() const { return exact_.empty(); }

 private:
  std::unordered_map<std::string, Upos> exact_;
  std::unordered_map<std::string, Upos> folded_;
};

/// TSV "word<TAB>UPOS", '#' comments and blank lines ignored.
inline Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("postag", "cannot open lexicon " + path.string());
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto l = detail::trim(line);
    if (l.empty() || l.front() == '#') continue;
    const std::string where = path.string() + ": line " + std::to_string(lineno) + ": ";
    const auto tab = l.find('\t');
    if (tab == std::string_view::npos) throw Error("postag", where + "expected word<TAB>UPOS");
    lex.add(std::string(detail::trim(l.substr(0, tab))), require_upos(detail::trim(l.substr(tab + 1)), where));
  }
  if (lex.empty()) throw Error("postag", "lexicon " + path.string() + " is empty");
  return lex;
}

namespace detail {

struct SuffixRule {
  std::string_view suffix;
  Upos tag;
};

// Longest suffixes first; matched against the case-folded form.
inline constexpr std::array<SuffixRule, 24> kSuffixRules = {{
    {"schaft", Upos::NOUN}, {"ieren", Upos::VERB}, {"ierte", Upos::VERB}, {"weise", Upos::ADV},
    {"ismus", Upos::NOUN},  {"heit", Upos::NOUN},  {"keit", Upos::NOUN},  {"chen", Upos::NOUN},
    {"lein", Upos::NOUN},   {"tion", Upos::NOUN},  {"lich", Upos::ADJ},   {"isch", Upos::ADJ},
    {"haft", Upos::ADJ},    {"iert", Upos::VERB},  {"test", Upos::VERB},  {"ung", Upos::NOUN},
    {"nis", Upos::NOUN},    {"bar", Upos::ADJ},    {"los", Upos::ADJ},    {"sam", Upos::ADJ},
    {"ten", Upos::VERB},    {"ig", Upos::ADJ},     {"en", Upos::VERB},    {"te", Upos::VERB},
}};

inline std::optional<Upos> suffix_tag(const std::string& folded) {
  for (const auto& r : kSuffixRules) {
    if (folded.size() >= r.suffix.size() + 2 && folded.ends_with(r.suffix)) return r.tag;
  }
  return std::nullopt;
}

inline Upos non_word_tag(std::string_view surface) {
  bool symbol = true;
  std::size_t pos = 0;
  while (pos < surface.size()) {
    const auto cp = utf8::next(surface, pos).value_or(0xFFFD);
    if (utf8::is_digit(cp)) return Upos::NUM;
    constexpr std::u32string_view symbols = U"€$£%&+=<>§#*/~^|@°";
    if (symbols.find(cp) == std::u32string_view::npos) symbol = false;
  }
  return symbol ? Upos::SYM : Upos::PUNCT;
}

inline bool starts_upper(std::string_view s) {
  std::size_t pos = 0;
  const auto cp = utf8::next(s, pos);
  return cp && utf8::is_upper(*cp);
}

}  // namespace detail

/// Lexicon lookup (exact, then case-folded); unknown capitalized words that
/// are not the first word of their sentence become NOUN; remaining unknowns go
/// through German suffix rules and fall back to X. Non-word tokens are NUM if
/// they contain a digit, SYM if made of symbol characters, else PUNCT.
inline TaggedCorpus baseline_tag(const TokenizedCorpus& tc, const Lexicon& lexicon) {
  if (lexicon.empty()) throw Error("postag", "baseline tagger needs a non-empty lexicon");
  TaggedCorpus tg;
  for (const auto& doc : tc.documents) {
    TaggedDocument td{doc.doc_id, {}};
    for (const auto& s : doc.sentences) {
      TaggedSentence out;
      bool seen_word = false;
      for (const auto& t : s.tokens) {
        Upos tag = Upos::X;
        if (!t.is_word) {
          tag = detail::non_word_tag(t.surface);
        } else if (const auto hit = lexicon.lookup(t.surface)) {
          tag = *hit;
        } else if (seen_word && detail::starts_upper(t.surface)) {
          tag = Upos::NOUN;
        } else {
          tag = detail::suffix_tag(utf8::fold(t.surface)).value_or(Upos::X);
        }
        if (t.is_word) seen_word = true;
        out.push_back({t.surface, tag});
      }
      td.sentences.push_back(std::move(out));
    }
    tg.documents.push_back(std::move(td));
  }
  return tg;
}

inline const std::set<Upos>& default_excluded_tags() {
  static const std::set<Upos> tags{Upos::PUNCT, Upos::X, Upos::SYM, Upos::INTJ};
  return tags;
}

struct PosDistribution {
  std::map<Upos, double> percent;  // one entry per counted tag, zero allowed
  std::size_t n_tagged_tokens = 0;

  bool operator==(const PosDistribution&) const = default;
};

/// Percentages over non-excluded tokens. PROPN is counted as NOUN.
inline PosDistribution pos_distribution(const TaggedCorpus& tg,
                                        const std::set<Upos>& exclude = default_excluded_tags()) {
  std::map<Upos, std::size_t> counts;
  for (std::size_t i = 0; i < kUposNames.size(); ++i) {
    const auto t = static_cast<Upos>(i);
    if (t != Upos::PROPN && !exclude.count(t)) counts[t] = 0;
  }
  std::size_t total = 0;
  for (const auto& d : tg.documents) {
    for (const auto& s : d.sentences) {
      for (const auto& tok : s) {
        const Upos t = tok.upos == Upos::PROPN ? Upos::NOUN : tok.upos;
        const auto it = counts.find(t);
        if (it == counts.end()) continue;
        ++it->second;
        ++total;
      }
    }
  }
  if (total == 0) throw Error("postag", "all tokens excluded from the POS distribution");
  PosDistribution dist;
  dist.n_tagged_tokens = total;
  for (const auto& [t, c] : counts) dist.percent[t] = 100.0 * static_cast<double>(c) / static_cast<double>(total);
  return dist;
}

struct PosDiffRow {
  Upos tag = Upos::X;
  double pct_a = 0.0;
  double pct_b = 0.0;
  double diff = 0.0;  // pct_b - pct_a

  bool operator==(const PosDiffRow&) const = default;
};

/// Rows sorted by pct_a descending (ties by tag name). Positive diff means
/// the tag is more frequent in `b`.
inline std::vector<PosDiffRow> pos_diff(const PosDistribution& a, const PosDistribution& b) {
  if (a.percent.size() != b.percent.size() ||
      !std::equal(a.percent.begin(), a.percent.end(), b.percent.begin(),
                  [](const auto& x, const auto& y) { return x.first == y.first; })) {
    throw Error("postag", "POS distributions are over different tag sets");
  }
  std::vector<PosDiffRow> rows;
  for (const auto& [t, pa] : a.percent) {
    const double pb = b.percent.at(t);
    rows.push_back({t, pa, pb, pb - pa});
  }
  std::sort(rows.begin(), rows.end(), [](const PosDiffRow& x, const PosDiffRow& y) {
    return x.pct_a != y.pct_a ? x.pct_a > y.pct_a : to_string(x.tag) < to_string(y.tag);
  });
  return rows;
}

inline void write_pos_tsv(std::ostream& out, const std::vector<PosDiffRow>& rows) {
  out << "tag\tpct_a\tpct_b\tdiff\n";
  out.precision(17);
  for (const auto& r : rows) out << to_string(r.tag) << '\t' << r.pct_a << '\t' << r.pct_b << '\t' << r.diff << '\n';
}

}  // namespace corpuslens

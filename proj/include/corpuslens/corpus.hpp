#pragma once

// Corpora (JSON Lines manifests) and word lists (stopwords, character names).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "corpuslens/error.hpp"
#include "corpuslens/utf8.hpp"

namespace corpuslens {

enum class Source { child, llm_zs, llm_fs, other };

inline std::string_view to_string(Source s) {
  switch (s) {
    case Source::child: return "child";
    case Source::llm_zs: return "llm-zs";
    case Source::llm_fs: return "llm-fs";
    case Source::other: return "other";
  }
  return "other";
}

inline Source parse_source(std::string_view s) {
  if (s == "child") return Source::child;
  if (s == "llm-zs") return Source::llm_zs;
  if (s == "llm-fs") return Source::llm_fs;
  if (s == "other") return Source::other;
  throw Error("corpus", "unknown source label '" + std::string(s) + "'");
}

/// One description of one picture story.
struct Document {
  std::string id;
  std::string story_id;
  Source source = Source::other;
  std::string text;
  std::map<std::string, std::string> meta;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::string name;
  std::vector<Document> documents;

  bool operator==(const Corpus&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline bool blank_after_trim(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto cp = utf8::next(s, pos);
    if (!cp) return false;
    if (!utf8::is_space(*cp)) return false;
  }
  return true;
}

inline std::string read_file(const std::filesystem::path& path, const char* module) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(module, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(module, "read failure on " + path.string());
  return std::move(ss).str();
}

inline std::string line_prefix(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace detail

/// Checks the corpus invariants (non-empty name, unique ids, non-empty text
/// and story). Throws corpuslens::Error naming the first offending document.
inline void validate(const Corpus& corpus) {
  if (corpus.name.empty()) throw Error("corpus", "corpus name is empty");
  std::unordered_set<std::string> seen;
  for (const auto& d : corpus.documents) {
    if (d.id.empty()) throw Error("corpus", "document with empty id");
    if (!seen.insert(d.id).second) throw Error("corpus", "duplicate document id '" + d.id + "'");
    if (d.story_id.empty()) throw Error("corpus", "document '" + d.id + "' has empty story");
    if (detail::blank_after_trim(d.text)) throw Error("corpus", "document '" + d.id + "' has empty text");
  }
}

/// Parses a JSON Lines manifest. Blank lines are skipped; errors carry the
/// 1-based line number, prefixed by `origin` (usually the file path).
inline Corpus parse_corpus(std::istream& in, std::string name, std::string_view origin = {}) {
  Corpus corpus;
  corpus.name = std::move(name);
  if (corpus.name.empty()) throw Error("corpus", "corpus name is empty");
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto where = (origin.empty() ? std::string() : std::string(origin) + ": ") +
                       detail::line_prefix(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error("corpus", where + "malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw Error("corpus", where + "expected a JSON object");
    const auto field = [&](const char* key) -> std::string {
      const auto it = j.find(key);
      if (it == j.end() || !it->is_string()) {
        throw Error("corpus", where + "missing or non-string field '" + key + "'");
      }
      return it->get<std::string>();
    };
    Document d;
    d.id = field("id");
    d.story_id = field("story");
    d.text = field("text");
    const auto source = field("source");
    try {
      d.source = parse_source(source);
    } catch (const Error&) {
      throw Error("corpus", where + "unknown source label '" + source + "'");
    }
    if (const auto it = j.find("meta"); it != j.end() && !it->is_null()) {
      if (!it->is_object()) throw Error("corpus", where + "field 'meta' must be an object");
      for (const auto& [k, v] : it->items()) {
        d.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    if (d.id.empty()) throw Error("corpus", where + "empty id");
    if (d.story_id.empty()) throw Error("corpus", where + "empty story");
    if (detail::blank_after_trim(d.text)) throw Error("corpus", where + "empty text");
    if (!ids.insert(d.id).second) throw Error("corpus", where + "duplicate id '" + d.id + "'");
    corpus.documents.push_back(std::move(d));
  }
  if (in.bad()) throw Error("corpus", "read failure");
  return corpus;
}

/// The corpus name is the file stem ("litkey.jsonl" -> "litkey").
inline Corpus load_corpus(const std::filesystem::path& manifest) {
  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw Error("corpus", "cannot open manifest " + manifest.string());
  return parse_corpus(in, manifest.stem().string(), manifest.string());
}

inline nlohmann::json to_json_line(const Document& d) {
  nlohmann::json j;
  j["id"] = d.id;
  j["story"] = d.story_id;
  j["text"] = d.text;
  j["source"] = std::string(to_string(d.source));
  if (!d.meta.empty()) j["meta"] = d.meta;
  return j;
}

inline void write_manifest(std::ostream& out, const Corpus& corpus) {
  for (const auto& d : corpus.documents) out << to_json_line(d).dump() << '\n';
}

inline void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("corpus", "cannot write " + path.string());
  write_manifest(out, corpus);
  if (!out) throw Error("corpus", "write failure on " + path.string());
}

/// Set of words with case-insensitive membership. Used for stopword lists and
/// protagonist names.
class WordSet {
 public:
  WordSet() = default;
  WordSet(std::initializer_list<std::string_view> words) {
    for (auto w : words) insert(w);
  }
  template <class Range>
  explicit WordSet(const Range& words) {
    for (const auto& w : words) insert(w);
  }

  void insert(std::string_view word) {
    if (word.empty()) throw Error("corpus", "empty word in word set");
    words_.insert(utf8::fold(word));
  }

  bool contains(std::string_view word) const { return words_.count(utf8::fold(word)) > 0; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  /// Case-folded members, sorted.
  const std::set<std::string, std::less<>>& folded() const { return words_; }

  bool operator==(const WordSet&) const = default;

 private:
  std::set<std::string, std::less<>> words_;
};

using StopwordSet = WordSet;

/// One token per line; blank lines and lines starting with '#' are ignored.
inline WordSet parse_stopwords(std::istream& in) {
  WordSet set;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!utf8::valid(line)) throw Error("corpus", detail::line_prefix(lineno) + "invalid UTF-8");
    const auto word = detail::trim(line);
    if (word.empty() || word.front() == '#') continue;
    set.insert(word);
  }
  if (in.bad()) throw Error("corpus", "read failure");
  return set;
}

inline WordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("corpus", "cannot open stopword file " + path.string());
  return parse_stopwords(in);
}

/// German function-word list mirroring NLTK's `stopwords.words("german")`.
inline const WordSet& default_german_stopwords() {
  static const WordSet set = [] {
    std::istringstream in(
        "aber alle allem allen aller alles als also am an ander andere anderem anderen anderer "
        "anderes anderm andern anderr anders auch auf aus bei bin bis bist da damit dann der den "
        "des dem die das dass daß derselbe derselben denselben desselben demselben dieselbe "
        "dieselben dasselbe dazu dein deine deinem deinen deiner deines denn derer dessen dich dir "
        "du dies diese diesem diesen dieser dieses doch dort durch ein eine einem einen einer eines "
        "einig einige einigem einigen einiger einiges einmal er ihn ihm es etwas euer eure eurem "
        "euren eurer eures für gegen gewesen hab habe haben hat hatte hatten hier hin hinter ich "
        "mich mir ihr ihre ihrem ihren ihrer ihres euch im in indem ins ist jede jedem jeden jeder "
        "jedes jene jenem jenen jener jenes jetzt kann kein keine keinem keinen keiner keines können "
        "könnte machen man manche manchem manchen mancher manches mein meine meinem meinen meiner "
        "meines mit muss musste nach nicht nichts noch nun nur ob oder ohne sehr sein seine seinem "
        "seinen seiner seines selbst sich sie ihnen sind so solche solchem solchen solcher solches "
        "soll sollte sondern sonst über um und uns unsere unserem unseren unser unseres unter viel "
        "vom von vor während war waren warst was weg weil weiter welche welchem welchen welcher "
        "welches wenn werde werden wie wieder will wir wird wirst wo wollen wollte würde würden zu "
        "zum zur zwar zwischen");
    WordSet s;
    std::string w;
    while (in >> w) s.insert(w);
    return s;
  }();
  return set;
}

/// The recurring protagonists of the picture stories.
inline WordSet default_character_names() { return WordSet{"Lars", "Lea", "Dodo"}; }

}  // namespace corpuslens

#pragma once

// Sentence segmentation and case-preserving word tokenization.
//
// Segmentation is terminator driven: a sentence ends after a run of '.', '!',
// '?' or '…' (plus directly following closing quotes/brackets) when the run is
// followed by whitespace or the end of the text. Missing punctuation therefore
// yields long sentences, which is what children's texts contain.
//
// Tokenization splits on whitespace, detaches leading and trailing
// punctuation one character at a time (a run of two or more periods stays one
// token), and keeps word-internal hyphens and apostrophes, decimal numbers
// ("9.6") and letter-dot-letter abbreviations ("z.B") whole. Case is never
// changed and every token is a substring of the input.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpuslens/corpus.hpp"
#include "corpuslens/utf8.hpp"

namespace corpuslens {

struct Token {
  std::string surface;
  bool is_word = false;         // contains at least one letter
  std::size_t char_length = 0;  // letters + digits

  bool operator==(const Token&) const = default;
};

inline Token make_token(std::string_view surface) {
  return Token{std::string(surface), utf8::contains_letter(surface), utf8::alnum_count(surface)};
}

struct SentenceTokens {
  std::vector<Token> tokens;

  bool operator==(const SentenceTokens&) const = default;
};

struct TokenizedDocument {
  std::string doc_id;
  std::string story_id;
  std::vector<SentenceTokens> sentences;

  bool operator==(const TokenizedDocument&) const = default;
};

struct TokenizedCorpus {
  std::string name;
  std::vector<TokenizedDocument> documents;

  bool operator==(const TokenizedCorpus&) const = default;
};

namespace detail {

struct Scalar {
  char32_t cp;
  std::size_t begin;  // byte offset
  std::size_t end;
};

/// Decodes into scalars with byte spans. Invalid bytes become U+FFFD spanning
/// one byte so that offsets stay aligned with the input.
inline std::vector<Scalar> scalars(std::string_view s) {
  std::vector<Scalar> out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t begin = pos;
    const auto cp = utf8::next(s, pos);
    if (!cp) {
      pos = begin + 1;
      out.push_back({0xFFFD, begin, pos});
    } else {
      out.push_back({*cp, begin, pos});
    }
  }
  return out;
}

inline bool is_terminator(char32_t c) { return c == '.' || c == '!' || c == '?' || c == 0x2026; }

inline bool is_closer(char32_t c) {
  switch (c) {
    case '"': case '\'': case ')': case ']': case '}':
    case 0xAB: case 0xBB: case 0x2019: case 0x201C: case 0x201D: case 0x2039: case 0x203A:
      return true;
    default:
      return false;
  }
}

inline bool is_joiner(char32_t c) {
  return c == '-' || c == 0x2010 || c == 0x2011 || c == '\'' || c == 0x2019;
}

inline std::string_view trim_unicode(std::string_view s) {
  const auto sc = scalars(s);
  std::size_t b = 0;
  std::size_t e = sc.size();
  while (b < e && utf8::is_space(sc[b].cp)) ++b;
  while (e > b && utf8::is_space(sc[e - 1].cp)) --e;
  if (b == e) return {};
  return s.substr(sc[b].begin, sc[e - 1].end - sc[b].begin);
}

/// Emits punctuation-only scalars [from, to) of `chunk` as tokens.
inline void emit_punctuation(std::string_view text, const std::vector<Scalar>& sc, std::size_t from,
                             std::size_t to, std::vector<Token>& out) {
  std::size_t i = from;
  while (i < to) {
    std::size_t j = i + 1;
    if (sc[i].cp == '.') {
      while (j < to && sc[j].cp == '.') ++j;
    }
    out.push_back(make_token(text.substr(sc[i].begin, sc[j - 1].end - sc[i].begin)));
    i = j;
  }
}

}  // namespace detail

/// Splits `text` into raw sentence strings (whitespace-trimmed, non-empty).
inline std::vector<std::string> segment_sentences(std::string_view text) {
  const auto sc = detail::scalars(text);
  std::vector<std::string> out;
  const auto push = [&](std::size_t begin_byte, std::size_t end_byte) {
    const auto piece = detail::trim_unicode(text.substr(begin_byte, end_byte - begin_byte));
    if (!piece.empty()) out.emplace_back(piece);
  };
  std::size_t start = 0;  // byte offset of the current sentence
  std::size_t i = 0;
  while (i < sc.size()) {
    if (!detail::is_terminator(sc[i].cp)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < sc.size() && detail::is_terminator(sc[j].cp)) ++j;
    while (j < sc.size() && detail::is_closer(sc[j].cp)) ++j;
    if (j == sc.size() || utf8::is_space(sc[j].cp)) {
      const std::size_t end = j == sc.size() ? text.size() : sc[j].begin;
      push(start, end);
      start = end;
    }
    i = j;
  }
  if (start < text.size()) push(start, text.size());
  return out;
}

inline SentenceTokens tokenize_sentence(std::string_view raw) {
  const auto sc = detail::scalars(raw);
  SentenceTokens sentence;
  auto& out = sentence.tokens;
  std::size_t i = 0;
  while (i < sc.size()) {
    if (utf8::is_space(sc[i].cp)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < sc.size() && !utf8::is_space(sc[j].cp)) ++j;
    // chunk is sc[i, j)
    std::size_t core_b = i;
    while (core_b < j && !utf8::is_alnum(sc[core_b].cp)) ++core_b;
    if (core_b == j) {
      detail::emit_punctuation(raw, sc, i, j, out);
      i = j;
      continue;
    }
    std::size_t core_e = j;
    while (!utf8::is_alnum(sc[core_e - 1].cp)) --core_e;
    detail::emit_punctuation(raw, sc, i, core_b, out);

    std::size_t piece = core_b;
    for (std::size_t k = core_b + 1; k + 1 < core_e; ++k) {
      const char32_t c = sc[k].cp;
      if (utf8::is_alnum(c)) continue;
      const char32_t prev = sc[k - 1].cp;
      const char32_t next = sc[k + 1].cp;
      const bool keep =
          (detail::is_joiner(c) && utf8::is_alnum(prev) && utf8::is_alnum(next)) ||
          ((c == '.' || c == ',') && utf8::is_digit(prev) && utf8::is_digit(next)) ||
          (c == '.' && utf8::is_letter(prev) && utf8::is_letter(next));
      if (keep) continue;
      if (k > piece) out.push_back(make_token(raw.substr(sc[piece].begin, sc[k - 1].end - sc[piece].begin)));
      out.push_back(make_token(raw.substr(sc[k].begin, sc[k].end - sc[k].begin)));
      piece = k + 1;
    }
    out.push_back(make_token(raw.substr(sc[piece].begin, sc[core_e - 1].end - sc[piece].begin)));

    detail::emit_punctuation(raw, sc, core_e, j, out);
    i = j;
  }
  return sentence;
}

inline TokenizedDocument tokenize_document(const Document& doc) {
  TokenizedDocument td{doc.id, doc.story_id, {}};
  for (const auto& raw : segment_sentences(doc.text)) {
    auto s = tokenize_sentence(raw);
    if (!s.tokens.empty()) td.sentences.push_back(std::move(s));
  }
  return td;
}

inline TokenizedCorpus tokenize_corpus(const Corpus& corpus) {
  TokenizedCorpus tc{corpus.name, {}};
  tc.documents.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) tc.documents.push_back(tokenize_document(d));
  return tc;
}

/// Keeps word tokens that are neither stopwords nor character names (both
/// matched case-insensitively).
inline std::vector<Token> filter_stopwords(std::span<const Token> tokens, const WordSet& stops,
                                           const WordSet& names = {}) {
  std::vector<Token> out;
  for (const auto& t : tokens) {
    if (!t.is_word) continue;
    if (stops.contains(t.surface) || names.contains(t.surface)) continue;
    out.push_back(t);
  }
  return out;
}

/// Calls `f(const Token&)` for every token of the corpus in order.
template <class F>
void for_each_token(const TokenizedCorpus& tc, F&& f) {
  for (const auto& d : tc.documents)
    for (const auto& s : d.sentences)
      for (const auto& t : s.tokens) f(t);
}

}  // namespace corpuslens

#pragma once

// Minimal UTF-8 handling: decoding with validation, scalar classification and
// case folding. Classification tables cover Latin, Greek, Cyrillic, Armenian,
// Hebrew, Arabic, kana, CJK and Hangul; that is enough for the German corpora
// this toolkit targets without pulling in ICU.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpuslens/error.hpp"

namespace corpuslens::utf8 {

/// Decodes the scalar starting at `pos` and advances `pos`. Returns nullopt on
/// malformed input (overlong forms, surrogates, truncated sequences).
inline std::optional<char32_t> next(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return std::nullopt;
  }
  if (pos + len > s.size()) return std::nullopt;
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
  pos += len;
  return cp;
}

inline bool valid(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (!next(s, pos)) return false;
  }
  return true;
}

/// Throws corpuslens::Error tagged with `module` on invalid input.
inline std::vector<char32_t> decode(std::string_view s, const char* module = "utf8") {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto cp = next(s, pos);
    if (!cp) throw Error(module, "invalid UTF-8 at byte " + std::to_string(pos));
    out.push_back(*cp);
  }
  return out;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append(out, cp);
  return out;
}

inline bool is_letter(char32_t c) {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
  if (c == 0xAA || c == 0xB5 || c == 0xBA) return true;
  if (c >= 0xC0 && c <= 0x2C1) return c != 0xD7 && c != 0xF7;
  if (c >= 0x370 && c <= 0x3FF) return c != 0x375 && c != 0x37E && c != 0x384 && c != 0x385 && c != 0x387 && c != 0x3F6;
  if (c >= 0x400 && c <= 0x52F) return c < 0x482 || c > 0x489;
  if (c >= 0x531 && c <= 0x587) return c != 0x557 && c != 0x558 && (c < 0x55A || c > 0x560);
  if (c >= 0x5D0 && c <= 0x5EA) return true;
  if (c >= 0x620 && c <= 0x64A) return true;
  if (c >= 0x1E00 && c <= 0x1FFF) return true;
  if (c >= 0x3041 && c <= 0x30FF) return c != 0x30A0 && c != 0x30FB;
  if (c >= 0x4E00 && c <= 0x9FFF) return true;
  if (c >= 0xAC00 && c <= 0xD7A3) return true;
  return false;
}

inline bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

inline bool is_alnum(char32_t c) { return is_letter(c) || is_digit(c); }

inline bool is_space(char32_t c) {
  switch (c) {
    case ' ': case '\t': case '\n': case '\v': case '\f': case '\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

inline char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c < 0xC0) return c;
  if (c <= 0xDE) return c == 0xD7 ? c : c + 0x20;
  if (c >= 0x100 && c <= 0x137) return c | 1;
  if (c >= 0x139 && c <= 0x148) return (c & 1) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return c | 1;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E) return (c & 1) ? c + 1 : c;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c == 0x1E9E) return 0xDF;
  return c;
}

inline bool is_upper(char32_t c) { return to_lower(c) != c; }

/// Lowercases every scalar; invalid bytes are passed through unchanged.
inline std::string fold(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t start = pos;
    const auto cp = next(s, pos);
    if (!cp) {
      out.push_back(s[start]);
      pos = start + 1;
      continue;
    }
    append(out, to_lower(*cp));
  }
  return out;
}

/// Number of letter scalars (umlauts and ß count once).
inline std::size_t letter_count(std::string_view s) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto cp = next(s, pos);
    if (!cp) {
      ++pos;
      continue;
    }
    if (is_letter(*cp)) ++n;
  }
  return n;
}

inline std::size_t alnum_count(std::string_view s) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto cp = next(s, pos);
    if (!cp) {
      ++pos;
      continue;
    }
    if (is_alnum(*cp)) ++n;
  }
  return n;
}

inline bool contains_letter(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto cp = next(s, pos);
    if (!cp) {
      ++pos;
      continue;
    }
    if (is_letter(*cp)) return true;
  }
  return false;
}

}  // namespace corpuslens::utf8

#include "cpc/tokenizer.hpp"

#include <cctype>

namespace cpc {

namespace {

bool is_ascii(char32_t cp) { return cp < 0x80; }

bool is_word_codepoint(char32_t cp) {
  return !is_unicode_space(cp) && !is_punct_codepoint(cp);
}

}  // namespace

char32_t decode_utf8(std::string_view text, std::size_t& i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  const unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  auto cont = [&](std::size_t k) {
    return k < text.size() && (byte(k) & 0xc0) == 0x80;
  };
  if ((b0 & 0xe0) == 0xc0 && cont(i + 1)) {
    char32_t cp = ((b0 & 0x1fu) << 6) | (byte(i + 1) & 0x3fu);
    i += 2;
    return cp;
  }
  if ((b0 & 0xf0) == 0xe0 && cont(i + 1) && cont(i + 2)) {
    char32_t cp = ((b0 & 0x0fu) << 12) | ((byte(i + 1) & 0x3fu) << 6) | (byte(i + 2) & 0x3fu);
    i += 3;
    return cp;
  }
  if ((b0 & 0xf8) == 0xf0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    char32_t cp = ((b0 & 0x07u) << 18) | ((byte(i + 1) & 0x3fu) << 12) |
                  ((byte(i + 2) & 0x3fu) << 6) | (byte(i + 3) & 0x3fu);
    i += 4;
    return cp;
  }
  ++i;  // invalid lead byte: treat as a latin-1 char
  return b0;
}

bool is_unicode_space(char32_t cp) {
  if (is_ascii(cp)) return std::isspace(static_cast<unsigned char>(cp)) != 0;
  switch (cp) {
    case 0x00a0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202f:
    case 0x205f:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200a;
  }
}

bool is_punct_codepoint(char32_t cp) {
  if (is_ascii(cp)) return std::ispunct(static_cast<unsigned char>(cp)) != 0;
  switch (cp) {
    case 0x00ab:  // «
    case 0x00bb:  // »
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2018:  // '
    case 0x2019:  // '
    case 0x201c:  // "
    case 0x201d:  // "
    case 0x2026:  // …
      return true;
    default:
      return false;
  }
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

namespace {

struct Codepoint {
  char32_t cp;
  std::size_t begin;
  std::size_t end;
};

std::vector<Codepoint> decode_all(std::string_view text) {
  std::vector<Codepoint> cps;
  cps.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t begin = i;
    const char32_t cp = decode_utf8(text, i);
    cps.push_back({cp, begin, i});
  }
  return cps;
}

void tokenize_chunk(std::string_view text, const std::vector<Codepoint>& cps,
                    std::size_t lo, std::size_t hi, std::vector<Token>& out) {
  bool has_word = false;
  for (std::size_t k = lo; k < hi; ++k) {
    if (is_word_codepoint(cps[k].cp)) {
      has_word = true;
      break;
    }
  }
  if (!has_word) return;  // punctuation-only chunk: zero tokens

  const auto push = [&](std::size_t a, std::size_t b) {
    const std::size_t byte_begin = cps[a].begin;
    const std::size_t byte_end = cps[b - 1].end;
    out.push_back({std::string(text.substr(byte_begin, byte_end - byte_begin)),
                   byte_begin, byte_end});
  };

  std::size_t k = lo;
  while (k < hi) {
    const char32_t cp = cps[k].cp;
    if (is_word_codepoint(cp)) {
      std::size_t j = k;
      while (j < hi && is_word_codepoint(cps[j].cp)) ++j;
      push(k, j);
      k = j;
    } else if (is_apostrophe(cp) && k > lo && is_word_codepoint(cps[k - 1].cp) &&
               k + 1 < hi && is_word_codepoint(cps[k + 1].cp)) {
      // contraction suffix: apostrophe + following word run is one token
      std::size_t j = k + 1;
      while (j < hi && is_word_codepoint(cps[j].cp)) ++j;
      push(k, j);
      k = j;
    } else {
      push(k, k + 1);
      ++k;
    }
  }
}

}  // namespace

std::vector<Token> DefaultTokenizer::tokenize(std::string_view text) const {
  std::vector<Token> out;
  const std::vector<Codepoint> cps = decode_all(text);
  std::size_t k = 0;
  while (k < cps.size()) {
    while (k < cps.size() && is_unicode_space(cps[k].cp)) ++k;
    std::size_t j = k;
    while (j < cps.size() && !is_unicode_space(cps[j].cp)) ++j;
    if (j > k) tokenize_chunk(text, cps, k, j, out);
    k = j;
  }
  return out;
}

const DefaultTokenizer& default_tokenizer() {
  static const DefaultTokenizer instance;
  return instance;
}

std::size_t count_tokens(std::string_view text) {
  return default_tokenizer().count(text);
}

}  // namespace cpc

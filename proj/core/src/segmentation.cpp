#include "cpc/segmentation.hpp"

#include <array>
#include <string_view>

namespace cpc {

namespace {

constexpr std::array<std::string_view, 13> kAbbreviations = {
    "Dr.", "Mr.", "Mrs.", "Ms.", "Prof.", "Fig.", "Eq.",
    "e.g.", "i.e.", "etc.", "vs.", "St.", "No.",
};

bool is_terminal(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }

bool is_closing(char32_t cp) {
  switch (cp) {
    case U'"':
    case U'\'':
    case U')':
    case U']':
    case 0x201d:
    case 0x2019:
    case 0x00bb:
      return true;
    default:
      return false;
  }
}

bool is_opening(char32_t cp) {
  switch (cp) {
    case U'"':
    case U'\'':
    case U'(':
    case U'[':
    case 0x201c:
    case 0x2018:
    case 0x00ab:
      return true;
    default:
      return false;
  }
}

bool starts_sentence(char32_t cp) {
  return (cp >= U'A' && cp <= U'Z') || is_opening(cp);
}

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

bool word_or_dot(char32_t cp) {
  return cp == U'.' || (!is_unicode_space(cp) && !is_punct_codepoint(cp));
}

// The word ending at the period cps[k] (inclusive), dots included, so
// "e.g." matches as a whole.
std::string_view word_ending_at(std::string_view text, const std::vector<Codepoint>& cps,
                                std::size_t k) {
  std::size_t w = k;
  while (w > 0 && word_or_dot(cps[w - 1].cp)) --w;
  return text.substr(cps[w].begin, cps[k].end - cps[w].begin);
}

bool is_abbreviation(std::string_view word) {
  for (auto abbr : kAbbreviations) {
    if (word == abbr) return true;
  }
  return false;
}

// Raw segment boundaries as [begin, end) codepoint index pairs.
std::vector<std::pair<std::size_t, std::size_t>> raw_segments(
    std::string_view text, const std::vector<Codepoint>& cps) {
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  const std::size_t n = cps.size();
  std::size_t start = 0;
  std::size_t k = 0;
  auto close = [&](std::size_t end) {
    if (end > start) segments.emplace_back(start, end);
  };
  while (k < n) {
    const char32_t cp = cps[k].cp;
    if (cp == U'\n') {
      close(k);
      start = k + 1;
      ++k;
      continue;
    }
    if (is_terminal(cp)) {
      if (cp == U'.' && is_abbreviation(word_ending_at(text, cps, k))) {
        ++k;
        continue;
      }
      std::size_t end = k + 1;
      while (end < n && is_closing(cps[end].cp)) ++end;
      if (end >= n) {
        close(end);
        start = end;
        k = end;
        continue;
      }
      if (is_unicode_space(cps[end].cp)) {
        std::size_t next = end;
        while (next < n && is_unicode_space(cps[next].cp) && cps[next].cp != U'\n') ++next;
        if (next < n && starts_sentence(cps[next].cp)) {
          close(end);
          start = next;
          k = next;
          continue;
        }
      }
      k = end;
      continue;
    }
    ++k;
  }
  close(n);
  return segments;
}

}  // namespace

std::vector<Sentence> split_sentences(std::string_view text, const TokenCounter& counter) {
  std::vector<Sentence> sentences;
  const std::vector<Codepoint> cps = decode_all(text);
  for (auto [lo, hi] : raw_segments(text, cps)) {
    while (lo < hi && is_unicode_space(cps[lo].cp)) ++lo;
    while (hi > lo && is_unicode_space(cps[hi - 1].cp)) --hi;
    if (lo >= hi) continue;
    Sentence s;
    s.char_begin = cps[lo].begin;
    s.char_end = cps[hi - 1].end;
    s.text = std::string(text.substr(s.char_begin, s.char_end - s.char_begin));
    s.token_count = counter.count(s.text);
    if (s.token_count == 0) continue;  // punctuation-only: separator material
    sentences.push_back(std::move(s));
  }
  return sentences;
}

Document Document::from_text(std::string text, const TokenCounter& counter) {
  Document doc;
  doc.text = std::move(text);
  doc.sentences = split_sentences(doc.text, counter);
  for (auto& sentence : doc.sentences) {
    std::vector<Token> sentence_tokens = counter.tokenize(sentence.text);
    sentence.token_begin = doc.tokens.size();
    sentence.token_end = doc.tokens.size() + sentence_tokens.size() - 1;
    sentence.token_count = sentence_tokens.size();
    for (Token& t : sentence_tokens) {
      t.begin += sentence.char_begin;
      t.end += sentence.char_begin;
      doc.tokens.push_back(std::move(t));
    }
  }
  doc.token_count = doc.tokens.size();
  return doc;
}

std::vector<std::string> Document::token_texts() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

std::vector<std::string> Document::sentence_token_texts(std::size_t sentence_index) const {
  const Sentence& s = sentences.at(sentence_index);
  std::vector<std::string> out;
  out.reserve(s.token_count);
  for (std::size_t i = s.token_begin; i <= s.token_end; ++i) out.push_back(tokens[i].text);
  return out;
}

}  // namespace cpc

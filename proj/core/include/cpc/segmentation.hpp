#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cpc/tokenizer.hpp"

namespace cpc {

struct Sentence {
  std::string text;
  std::size_t char_begin = 0;  // byte offsets into the document text
  std::size_t char_end = 0;
  std::size_t token_begin = 0;  // inclusive indices into the document token stream
  std::size_t token_end = 0;    // inclusive
  std::size_t token_count = 0;
};

// A segmented, tokenized context. The document token stream is the
// concatenation of the kept sentences' tokens; sentences that tokenize to
// zero tokens (punctuation-only) are dropped and their characters become
// part of the neighbouring separators.
struct Document {
  std::string text;
  std::vector<Sentence> sentences;
  std::vector<Token> tokens;  // offsets are into `text`
  std::size_t token_count = 0;

  static Document from_text(std::string text,
                            const TokenCounter& counter = default_tokenizer());

  std::vector<std::string> token_texts() const;
  std::vector<std::string> sentence_token_texts(std::size_t sentence_index) const;
};

// Rule-based splitter: a sentence ends at {. ! ?} (plus any adjacent closing
// quotes/brackets) when followed by whitespace and an uppercase letter,
// opening quote, or bracket; a fixed abbreviation list suppresses the split;
// any newline is a hard boundary (list items, headings). Deterministic.
std::vector<Sentence> split_sentences(std::string_view text,
                                      const TokenCounter& counter = default_tokenizer());

}  // namespace cpc

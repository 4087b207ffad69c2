#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cpc {

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the tokenized string
  std::size_t end = 0;
};

// Pluggable token counter. Budgets, spans, and masks are always expressed in
// the active counter's units, so swapping in a subword counter changes
// accounting consistently everywhere.
class TokenCounter {
 public:
  virtual ~TokenCounter() = default;
  virtual std::vector<Token> tokenize(std::string_view text) const = 0;

  std::size_t count(std::string_view text) const { return tokenize(text).size(); }

  std::vector<std::string> token_texts(std::string_view text) const {
    std::vector<std::string> out;
    for (auto& t : tokenize(text)) out.push_back(std::move(t.text));
    return out;
  }
};

// Default deterministic tokenizer:
//   - text splits into chunks on Unicode whitespace;
//   - a chunk with no alphanumeric codepoint yields no tokens (so
//     punctuation-only lines count zero);
//   - otherwise every punctuation codepoint is a single token, except an
//     apostrophe between word characters, which fuses with the following
//     word run ("don't" -> "don", "'t");
//   - runs of word characters (alphanumerics and any non-punctuation,
//     non-space codepoint) form one token.
// Counting is monotone under prefix extension; the punctuation-only-chunk
// rule is the one documented boundary effect of additivity.
class DefaultTokenizer final : public TokenCounter {
 public:
  std::vector<Token> tokenize(std::string_view text) const override;
};

const DefaultTokenizer& default_tokenizer();

// Convenience over default_tokenizer().count().
std::size_t count_tokens(std::string_view text);

// Codepoint classes used by the tokenizer and the sentence splitter.
bool is_unicode_space(char32_t cp);
bool is_punct_codepoint(char32_t cp);
bool is_apostrophe(char32_t cp);

// Decodes the UTF-8 codepoint at byte offset i; advances i past it. Invalid
// bytes decode as themselves (latin-1 fallback) so no input can throw.
char32_t decode_utf8(std::string_view text, std::size_t& i);

}  // namespace cpc

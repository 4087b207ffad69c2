#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpc/curation.hpp"
#include "cpc/error.hpp"
#include "cpc/providers.hpp"
#include "cpc/rng.hpp"
#include "cpc/segmentation.hpp"

namespace cpc::test {

inline const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> pool = {
      "alpha", "bravo", "copper", "delta", "ember",  "falcon", "garnet", "harbor",
      "imber", "juno",  "kelp",   "lumen", "meadow", "north",  "onyx",   "pine",
      "quill", "river", "slate",  "tundra", "umber", "violet", "willow", "xenon",
      "yarrow", "zephyr"};
  return pool;
}

inline std::string random_sentence(Rng& rng, std::size_t words) {
  const auto& pool = word_pool();
  std::string s;
  for (std::size_t w = 0; w < words; ++w) {
    std::string word = pool[rng.uniform_int(pool.size())];
    if (w == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
    if (w > 0) s += ' ';
    s += word;
  }
  s += '.';
  return s;
}

// Sentences of 3..12 words joined by single spaces; every sentence has at
// least 4 tokens (words + final period).
inline Document random_document(Rng& rng, std::size_t sentences) {
  std::string text;
  for (std::size_t i = 0; i < sentences; ++i) {
    if (i > 0) text += ' ';
    text += random_sentence(rng, 3 + rng.uniform_int(10));
  }
  return Document::from_text(text);
}

// Embedder with one fixed vector per whole token sequence (keyed by the
// joined tokens), so sentence- and question-level cosines are exact by
// construction. Every token of a known sequence maps to the same vector.
class KeyedEmbedder final : public Embedder {
 public:
  void set(const std::vector<std::string>& tokens, std::vector<double> vector) {
    vectors_[join(tokens)] = std::move(vector);
  }
  void set_text(const std::string& text, std::vector<double> vector) {
    set(default_tokenizer().token_texts(text), std::move(vector));
  }

  TokenEmbeddings embed_document(std::span<const std::string> tokens) const override {
    const auto it = vectors_.find(join({tokens.begin(), tokens.end()}));
    if (it == vectors_.end()) {
      throw Error(ErrorCode::transport, "KeyedEmbedder: unknown token sequence");
    }
    TokenEmbeddings out;
    out.dim = it->second.size();
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      out.data.insert(out.data.end(), it->second.begin(), it->second.end());
    }
    return out;
  }

 private:
  static std::string join(const std::vector<std::string>& tokens) {
    std::string key;
    for (const auto& t : tokens) {
      key += t;
      key += '\x1f';
    }
    return key;
  }
  std::map<std::string, std::vector<double>> vectors_;
};

}  // namespace cpc::test

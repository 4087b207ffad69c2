#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpc/embedding.hpp"
#include "cpc/tokenizer.hpp"

namespace cpc {

// Token-level encoder (f_theta role). Context awareness comes from how the
// caller uses it: whole-document token lists give context-aware vectors,
// a sentence's own tokens alone give plain vectors.
class Embedder {
 public:
  virtual ~Embedder() = default;

  // One vector per token. Throws context_overflow past the provider limit.
  virtual TokenEmbeddings embed_document(std::span<const std::string> tokens) const = 0;

  // Mean-pool over the text's own tokens, normalized. The text is embedded
  // alone, with no surrounding context.
  Embedding embed_text(std::span<const std::string> tokens) const;
};

// Embeds the question text alone; throws empty_question when it has no tokens.
Embedding embed_question(const Embedder& embedder, std::string_view question,
                         const TokenCounter& counter = default_tokenizer());

// Plain (non-context-aware) sentence embedding for curation-time mining.
Embedding embed_sentence(const Embedder& embedder, std::string_view sentence,
                         const TokenCounter& counter = default_tokenizer());

// Pure offline encoder for tests and benchmarks: each token's vector is
// drawn from a PRNG seeded by the token's hash, so identical inputs are
// bit-identical across runs and platforms.
class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dim = 64, std::uint64_t seed = 0,
                        std::size_t max_tokens = 1u << 20);

  TokenEmbeddings embed_document(std::span<const std::string> tokens) const override;

  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::size_t max_tokens_;
};

// Text generator (psi role).
class GenerationProvider {
 public:
  virtual ~GenerationProvider() = default;
  virtual std::string generate(std::string_view prompt) = 0;
};

std::uint64_t prompt_hash(std::string_view prompt);

// Canned responses keyed by prompt hash; unknown prompts either fall back to
// the default response or raise a transport error.
class ScriptedGenerator final : public GenerationProvider {
 public:
  void add_response(std::string_view prompt, std::string response);
  void add_response_for_hash(std::uint64_t hash, std::string response);
  void set_default_response(std::string response);

  std::string generate(std::string_view prompt) override;

 private:
  std::map<std::uint64_t, std::string> responses_;
  std::optional<std::string> default_response_;
};

// Full next-token distributions of the answer under teacher forcing,
// conditioned on context (+ question when nonempty). One distribution per
// answer token position (phi role).
struct AnswerDensities {
  std::vector<std::vector<double>> distributions;
  std::size_t vocab_size = 0;
};

class DensityProvider {
 public:
  virtual ~DensityProvider() = default;
  virtual AnswerDensities answer_distributions(std::string_view context,
                                               std::string_view question,
                                               std::string_view answer) const = 0;
};

// Position-independent toy density: Laplace-smoothed unigram counts of the
// conditioning text over a vocabulary fixed at construction.
class UnigramDensityProvider final : public DensityProvider {
 public:
  explicit UnigramDensityProvider(std::string_view vocab_corpus, double alpha = 1.0,
                                  const TokenCounter& counter = default_tokenizer());

  AnswerDensities answer_distributions(std::string_view context, std::string_view question,
                                       std::string_view answer) const override;

  std::size_t vocab_size() const { return vocab_.size(); }

 private:
  std::vector<std::string> vocab_;
  std::map<std::string, std::size_t> vocab_index_;
  double alpha_;
  const TokenCounter& counter_;
};

// Laplace-smoothed bigram counts over the conditioning sequence
// (context tokens then question tokens). At answer position t the previous
// token is the last conditioning token for t = 0, else answer token t-1.
class BigramDensityProvider final : public DensityProvider {
 public:
  explicit BigramDensityProvider(std::string_view vocab_corpus, double alpha = 1.0,
                                 const TokenCounter& counter = default_tokenizer());

  AnswerDensities answer_distributions(std::string_view context, std::string_view question,
                                       std::string_view answer) const override;

  std::size_t vocab_size() const { return vocab_.size(); }
  std::size_t token_id(std::string_view token) const;  // unk id when absent

 private:
  std::vector<std::string> vocab_;  // index 0 is <unk>
  std::map<std::string, std::size_t> vocab_index_;
  double alpha_;
  const TokenCounter& counter_;
};

}  // namespace cpc

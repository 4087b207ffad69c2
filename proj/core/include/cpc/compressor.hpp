#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpc/providers.hpp"
#include "cpc/segmentation.hpp"

namespace cpc {

// Exactly one of ratio and budget_tokens is set. A ratio derives the budget
// as floor(ratio * original_tokens).
struct CompressionRequest {
  Document context;
  std::string question;
  std::optional<double> ratio;
  std::optional<std::size_t> budget_tokens;
};

struct ScoredSentence {
  std::size_t index = 0;
  double score = 0.0;
  std::size_t token_count = 0;
};

struct CompressionResult {
  std::vector<std::size_t> kept_indices;  // strictly ascending
  std::string compressed_text;
  std::size_t original_tokens = 0;
  std::size_t compressed_tokens = 0;
  double realized_ratio = 0.0;
  bool truncated = false;
};

// One relevance score per sentence: cosine between the question embedding
// and the sentence's pooled span over whole-document token embeddings.
std::vector<ScoredSentence> score_sentences(const CompressionRequest& request,
                                            const Embedder& embedder,
                                            const TokenCounter& counter = default_tokenizer());

// Greedy by descending score (ties to the lower index): a sentence is kept
// iff its token count fits the remaining budget; the scan continues past
// non-fitting sentences. Result is sorted ascending by index.
std::vector<std::size_t> select_under_budget(std::span<const ScoredSentence> scored,
                                             std::size_t budget);

// score -> select -> restore original order -> join kept sentences with a
// single space. If nothing fits, falls back to the highest-scored sentence
// truncated to the first `budget` tokens (flagged).
CompressionResult compress(const CompressionRequest& request, const Embedder& embedder,
                           const TokenCounter& counter = default_tokenizer());

}  // namespace cpc

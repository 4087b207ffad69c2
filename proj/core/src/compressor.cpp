#include "cpc/compressor.hpp"

#include <algorithm>
#include <cmath>

#include "cpc/error.hpp"

namespace cpc {

namespace {

std::size_t resolve_budget(const CompressionRequest& request) {
  if (request.ratio.has_value() == request.budget_tokens.has_value()) {
    throw Error(ErrorCode::invalid_argument, "set exactly one of ratio and budget_tokens");
  }
  if (request.budget_tokens) {
    if (*request.budget_tokens < 1) {
      throw Error(ErrorCode::invalid_argument, "budget_tokens must be >= 1");
    }
    return *request.budget_tokens;
  }
  const double ratio = *request.ratio;
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "ratio must be in (0, 1]");
  }
  const auto budget = static_cast<std::size_t>(
      std::floor(ratio * static_cast<double>(request.context.token_count)));
  if (budget == 0) {
    throw Error(ErrorCode::zero_budget, "floor(ratio * tokens) is zero");
  }
  return budget;
}

// Truncate a sentence to its first `budget` tokens by cutting the original
// text at a token end, so re-tokenizing the result yields exactly that
// prefix of tokens.
std::string truncate_sentence(const Document& doc, const Sentence& s, std::size_t budget) {
  const std::size_t last = s.token_begin + budget - 1;
  const std::size_t cut = doc.tokens[last].end;
  return std::string(doc.text.substr(s.char_begin, cut - s.char_begin));
}

}  // namespace

std::vector<ScoredSentence> score_sentences(const CompressionRequest& request,
                                            const Embedder& embedder,
                                            const TokenCounter& counter) {
  const Document& doc = request.context;
  if (doc.sentences.empty()) {
    throw Error(ErrorCode::empty_context, "context has no sentences");
  }
  const Embedding question = embed_question(embedder, request.question, counter);
  const TokenEmbeddings token_embs = embedder.embed_document(doc.token_texts());

  std::vector<ScoredSentence> scored;
  scored.reserve(doc.sentences.size());
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const Sentence& s = doc.sentences[i];
    const Embedding span = pool_span(token_embs, s.token_begin, s.token_end);
    scored.push_back({i, cosine(span, question), s.token_count});
  }
  return scored;
}

std::vector<std::size_t> select_under_budget(std::span<const ScoredSentence> scored,
                                             std::size_t budget) {
  std::vector<std::size_t> order(scored.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scored[a].score != scored[b].score) return scored[a].score > scored[b].score;
    return scored[a].index < scored[b].index;
  });

  std::vector<std::size_t> kept;
  std::size_t remaining = budget;
  for (std::size_t pos : order) {
    if (scored[pos].token_count <= remaining) {
      kept.push_back(scored[pos].index);
      remaining -= scored[pos].token_count;
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

CompressionResult compress(const CompressionRequest& request, const Embedder& embedder,
                           const TokenCounter& counter) {
  const Document& doc = request.context;
  if (doc.sentences.empty()) {
    throw Error(ErrorCode::empty_context, "context has no sentences");
  }
  const std::size_t budget = resolve_budget(request);
  const std::vector<ScoredSentence> scored = score_sentences(request, embedder, counter);

  CompressionResult result;
  result.original_tokens = doc.token_count;
  result.kept_indices = select_under_budget(scored, budget);

  if (result.kept_indices.empty()) {
    // Nothing fits whole: emit the best sentence cut down to the budget.
    const auto best = std::min_element(
        scored.begin(), scored.end(), [](const ScoredSentence& a, const ScoredSentence& b) {
          if (a.score != b.score) return a.score > b.score;
          return a.index < b.index;
        });
    result.kept_indices.push_back(best->index);
    result.compressed_text = truncate_sentence(doc, doc.sentences[best->index], budget);
    result.compressed_tokens = budget;
    result.truncated = true;
  } else {
    std::string text;
    std::size_t tokens = 0;
    for (std::size_t idx : result.kept_indices) {
      if (!text.empty()) text += ' ';
      text += doc.sentences[idx].text;
      tokens += doc.sentences[idx].token_count;
    }
    result.compressed_text = std::move(text);
    result.compressed_tokens = tokens;
  }
  result.realized_ratio = result.original_tokens == 0
                              ? 0.0
                              : static_cast<double>(result.compressed_tokens) /
                                    static_cast<double>(result.original_tokens);
  return result;
}

}  // namespace cpc

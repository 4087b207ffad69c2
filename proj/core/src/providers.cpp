#include "cpc/providers.hpp"

#include <cmath>

#include "cpc/error.hpp"
#include "cpc/rng.hpp"

namespace cpc {

Embedding Embedder::embed_text(std::span<const std::string> tokens) const {
  const TokenEmbeddings emb = embed_document(tokens);
  return pool_span(emb, 0, emb.size() - 1);
}

Embedding embed_question(const Embedder& embedder, std::string_view question,
                         const TokenCounter& counter) {
  const std::vector<std::string> tokens = counter.token_texts(question);
  if (tokens.empty()) {
    throw Error(ErrorCode::empty_question, "question has no tokens");
  }
  return embedder.embed_text(tokens);
}

Embedding embed_sentence(const Embedder& embedder, std::string_view sentence,
                         const TokenCounter& counter) {
  const std::vector<std::string> tokens = counter.token_texts(sentence);
  if (tokens.empty()) {
    throw Error(ErrorCode::empty_context, "sentence has no tokens");
  }
  return embedder.embed_text(tokens);
}

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed, std::size_t max_tokens)
    : dim_(dim), seed_(seed), max_tokens_(max_tokens) {}

TokenEmbeddings HashEmbedder::embed_document(std::span<const std::string> tokens) const {
  if (tokens.empty()) {
    throw Error(ErrorCode::empty_context, "embed_document needs at least one token");
  }
  if (tokens.size() > max_tokens_) {
    throw Error(ErrorCode::context_overflow, "token count exceeds provider limit");
  }
  TokenEmbeddings out = TokenEmbeddings::zeros(tokens.size(), dim_);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const std::uint64_t base = Rng::mix(seed_, fnv1a(tokens[t]));
    const std::span<double> v = out.vector(t);
    for (std::size_t d = 0; d < dim_; ++d) {
      const std::uint64_t bits = Rng::mix(base, d);
      v[d] = static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;  // [-1, 1)
    }
  }
  return out;
}

std::uint64_t prompt_hash(std::string_view prompt) { return fnv1a(prompt); }

void ScriptedGenerator::add_response(std::string_view prompt, std::string response) {
  responses_[prompt_hash(prompt)] = std::move(response);
}

void ScriptedGenerator::add_response_for_hash(std::uint64_t hash, std::string response) {
  responses_[hash] = std::move(response);
}

void ScriptedGenerator::set_default_response(std::string response) {
  default_response_ = std::move(response);
}

std::string ScriptedGenerator::generate(std::string_view prompt) {
  const auto it = responses_.find(prompt_hash(prompt));
  if (it != responses_.end()) return it->second;
  if (default_response_) return *default_response_;
  throw Error(ErrorCode::transport, "no scripted response for prompt");
}

namespace {

void build_vocab(std::string_view corpus, const TokenCounter& counter,
                 std::vector<std::string>& vocab, std::map<std::string, std::size_t>& index) {
  vocab.push_back("<unk>");
  index["<unk>"] = 0;
  for (const std::string& t : counter.token_texts(corpus)) {
    if (index.emplace(t, vocab.size()).second) vocab.push_back(t);
  }
}

std::vector<std::size_t> ids_of(const std::map<std::string, std::size_t>& index,
                                std::string_view text, const TokenCounter& counter) {
  std::vector<std::size_t> ids;
  for (const std::string& t : counter.token_texts(text)) {
    const auto it = index.find(t);
    ids.push_back(it == index.end() ? 0 : it->second);
  }
  return ids;
}

std::vector<std::size_t> conditioning_ids(const std::map<std::string, std::size_t>& index,
                                          std::string_view context, std::string_view question,
                                          const TokenCounter& counter) {
  std::vector<std::size_t> ids = ids_of(index, context, counter);
  if (!question.empty()) {
    for (std::size_t id : ids_of(index, question, counter)) ids.push_back(id);
  }
  if (ids.empty()) {
    throw Error(ErrorCode::empty_context, "density conditioning text has no tokens");
  }
  return ids;
}

}  // namespace

UnigramDensityProvider::UnigramDensityProvider(std::string_view vocab_corpus, double alpha,
                                               const TokenCounter& counter)
    : alpha_(alpha), counter_(counter) {
  build_vocab(vocab_corpus, counter, vocab_, vocab_index_);
}

AnswerDensities UnigramDensityProvider::answer_distributions(std::string_view context,
                                                             std::string_view question,
                                                             std::string_view answer) const {
  const std::vector<std::size_t> answer_ids = ids_of(vocab_index_, answer, counter_);
  if (answer_ids.empty()) {
    throw Error(ErrorCode::empty_answer, "answer tokenizes to zero tokens");
  }
  const std::vector<std::size_t> cond = conditioning_ids(vocab_index_, context, question, counter_);
  std::vector<double> counts(vocab_.size(), 0.0);
  for (std::size_t id : cond) counts[id] += 1.0;
  const double total = static_cast<double>(cond.size()) + alpha_ * static_cast<double>(vocab_.size());
  std::vector<double> dist(vocab_.size());
  for (std::size_t w = 0; w < vocab_.size(); ++w) dist[w] = (counts[w] + alpha_) / total;

  AnswerDensities out;
  out.vocab_size = vocab_.size();
  out.distributions.assign(answer_ids.size(), dist);
  return out;
}

BigramDensityProvider::BigramDensityProvider(std::string_view vocab_corpus, double alpha,
                                             const TokenCounter& counter)
    : alpha_(alpha), counter_(counter) {
  build_vocab(vocab_corpus, counter, vocab_, vocab_index_);
}

std::size_t BigramDensityProvider::token_id(std::string_view token) const {
  const auto it = vocab_index_.find(std::string(token));
  return it == vocab_index_.end() ? 0 : it->second;
}

AnswerDensities BigramDensityProvider::answer_distributions(std::string_view context,
                                                            std::string_view question,
                                                            std::string_view answer) const {
  const std::vector<std::size_t> answer_ids = ids_of(vocab_index_, answer, counter_);
  if (answer_ids.empty()) {
    throw Error(ErrorCode::empty_answer, "answer tokenizes to zero tokens");
  }
  const std::vector<std::size_t> cond = conditioning_ids(vocab_index_, context, question, counter_);

  const std::size_t v = vocab_.size();
  std::vector<double> pair_counts(v * v, 0.0);
  std::vector<double> prev_counts(v, 0.0);
  for (std::size_t k = 0; k + 1 < cond.size(); ++k) {
    pair_counts[cond[k] * v + cond[k + 1]] += 1.0;
    prev_counts[cond[k]] += 1.0;
  }

  AnswerDensities out;
  out.vocab_size = v;
  out.distributions.reserve(answer_ids.size());
  for (std::size_t t = 0; t < answer_ids.size(); ++t) {
    const std::size_t prev = (t == 0) ? cond.back() : answer_ids[t - 1];
    const double denom = prev_counts[prev] + alpha_ * static_cast<double>(v);
    std::vector<double> dist(v);
    for (std::size_t w = 0; w < v; ++w) {
      dist[w] = (pair_counts[prev * v + w] + alpha_) / denom;
    }
    out.distributions.push_back(std::move(dist));
  }
  return out;
}

}  // namespace cpc

#include "cpc/toy_encoder.hpp"

#include "cpc/error.hpp"

namespace cpc {

ToyEncoder::ToyEncoder(ToyEncoderParams params, Vocabulary vocab, std::size_t max_tokens)
    : params_(std::move(params)), vocab_(std::move(vocab)), max_tokens_(max_tokens) {
  if (params_.vocab != vocab_.size()) {
    throw Error(ErrorCode::invalid_argument, "parameter table and vocabulary sizes differ");
  }
}

TokenEmbeddings ToyEncoder::embed_document(std::span<const std::string> tokens) const {
  if (tokens.empty()) {
    throw Error(ErrorCode::empty_context, "embed_document needs at least one token");
  }
  if (tokens.size() > max_tokens_) {
    throw Error(ErrorCode::context_overflow, "token count exceeds provider limit");
  }
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const std::string& t : tokens) ids.push_back(vocab_.id_of(t));

  EncoderForward f = encoder_forward(params_, ids);
  TokenEmbeddings out;
  out.dim = params_.dim;
  out.data = std::move(f.hidden);
  return out;
}

}  // namespace cpc

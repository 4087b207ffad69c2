#pragma once

#include <span>
#include <string>

#include "cpc/providers.hpp"
#include "cpc/trainer.hpp"

namespace cpc {

// Trained toy encoder behind the Embedder interface; unknown tokens map to
// <unk>. Immutable after construction, shareable across threads.
class ToyEncoder final : public Embedder {
 public:
  ToyEncoder(ToyEncoderParams params, Vocabulary vocab, std::size_t max_tokens = 1u << 20);

  TokenEmbeddings embed_document(std::span<const std::string> tokens) const override;

  const ToyEncoderParams& params() const { return params_; }
  const Vocabulary& vocab() const { return vocab_; }

 private:
  ToyEncoderParams params_;
  Vocabulary vocab_;
  std::size_t max_tokens_;
};

}  // namespace cpc

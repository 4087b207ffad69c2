#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cpc/curation.hpp"
#include "cpc/tokenizer.hpp"

namespace cpc {

class Vocabulary {
 public:
  Vocabulary();  // starts with <unk> and <mask>

  int add(std::string token);            // returns the id (existing or new)
  int id_of(std::string_view token) const;  // unk when absent
  int unk_id() const { return 0; }
  int mask_id() const { return 1; }
  std::size_t size() const { return tokens_.size(); }
  const std::string& token(std::size_t id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<int> ids_of(std::span<const std::string> tokens) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Trainable toy encoder: an embedding lookup followed by one dense
// bidirectional mixing layer
//   Z_t = tanh(W1 * H_t + W2 * mean(H) + bias)
// so every token's output depends on the whole sequence, plus an output
// head for masked-next-token prediction. All tensors are flat row-major
// vector<double>; the same struct holds gradients and optimizer moments.
struct ToyEncoderParams {
  std::size_t dim = 0;
  std::size_t vocab = 0;
  std::vector<double> token_embedding;  // vocab x dim
  std::vector<double> w1;               // dim x dim
  std::vector<double> w2;               // dim x dim
  std::vector<double> bias;             // dim
  std::vector<double> output_head;      // dim x vocab

  static ToyEncoderParams init(std::size_t vocab, std::size_t dim, std::uint64_t seed);
  static ToyEncoderParams zeros_like(const ToyEncoderParams& shape);

  std::size_t parameter_count() const;
  // Flat views for generic optimizer/finite-difference loops.
  std::vector<std::vector<double>*> tensors();
  std::vector<const std::vector<double>*> tensors() const;
};

struct EncoderForward {
  std::vector<int> ids;
  std::vector<double> embedded;  // L x dim (H)
  std::vector<double> mean;      // dim
  std::vector<double> hidden;    // L x dim (Z)
};

EncoderForward encoder_forward(const ToyEncoderParams& params, std::span<const int> ids);

// Accumulates parameter gradients given dLoss/dZ for every position.
void encoder_backward(const ToyEncoderParams& params, const EncoderForward& forward,
                      const std::vector<double>& d_hidden, ToyEncoderParams& grads);

struct MaskedBatch {
  std::vector<int> ids;                  // mask ids substituted in place
  std::vector<std::size_t> positions;    // masked positions, ascending
  std::vector<int> original_ids;         // parallel to positions
};

// Masks exactly round(fraction * length) positions, seeded sampling
// without replacement.
MaskedBatch mask_tokens(std::span<const int> ids, double fraction, std::uint64_t seed,
                        int mask_id);

// Reference into a batch: another sample's positive, or a sample's negative.
struct NegativeRef {
  bool other_positive = false;
  std::size_t sample = 0;
  std::size_t negative = 0;  // unused when other_positive
};

// Extended negative set per sample: all other samples' positives and
// negatives plus the sample's own negatives; size (B-1)(1+M) + M.
std::vector<std::vector<NegativeRef>> build_in_batch_negatives(std::size_t batch_size,
                                                               std::size_t negatives_per_sample);

struct BatchEmbeddings {
  std::vector<std::vector<double>> questions;              // B x dim
  std::vector<std::vector<double>> positives;              // B x dim
  std::vector<std::vector<std::vector<double>>> negatives;  // B x M x dim
};

struct ContrastiveResult {
  double loss = 0.0;                    // batch mean
  std::vector<double> per_sample;       // one loss per sample
  std::vector<std::vector<double>> d_questions;
  std::vector<std::vector<double>> d_positives;
  std::vector<std::vector<std::vector<double>>> d_negatives;
};

// Batch-mean InfoNCE over the extended negative sets, with analytic
// gradients w.r.t. every embedding. Default similarity is cos/temperature;
// literal_double_exp applies exp(cos) inside the softmax instead, which is
// how the loss is written in some derivations (kept for comparison).
ContrastiveResult contrastive_loss(const BatchEmbeddings& batch, double temperature,
                                   bool literal_double_exp = false);

struct MntpResult {
  double loss = 0.0;
  ToyEncoderParams grads;
  std::size_t predicted_positions = 0;
};

// Masked next token prediction: each masked token is predicted from the
// hidden state one position earlier (position-0 masks are skipped), mean
// cross-entropy over predicted positions. Throws when no position is
// predictable. same_position switches to classic masked-LM prediction from
// the masked position itself (every mask is then predictable).
MntpResult mntp_loss(const ToyEncoderParams& params, const MaskedBatch& masked,
                     bool same_position = false);

struct TrainConfig {
  std::size_t batch_size = 32;         // B
  std::size_t negatives_per_sample = 2;  // M
  double mask_fraction = 0.80;         // delta
  double learning_rate = 5e-5;
  double temperature = 1.0;
  std::size_t steps = 500;
  std::uint64_t seed = 0;
  bool literal_double_exp = false;
  bool mntp_same_position = false;
  std::size_t dim = 32;
  double holdout_fraction = 0.25;
  std::size_t eval_every = 25;
};

struct TrainSample {
  std::vector<int> context_ids;
  std::vector<int> question_ids;
  std::pair<std::size_t, std::size_t> positive_span;               // inclusive
  std::vector<std::pair<std::size_t, std::size_t>> negative_spans;  // inclusive
};

struct TrainBatch {
  std::vector<TrainSample> samples;
};

struct StepLosses {
  double contrastive = 0.0;
  double mntp = 0.0;
  double total = 0.0;
};

class AdamOptimizer {
 public:
  explicit AdamOptimizer(const ToyEncoderParams& shape, double beta1 = 0.9,
                         double beta2 = 0.999, double epsilon = 1e-8);

  void update(ToyEncoderParams& params, const ToyEncoderParams& grads, double learning_rate);

 private:
  ToyEncoderParams first_;
  ToyEncoderParams second_;
  double beta1_, beta2_, epsilon_;
  std::size_t step_ = 0;
};

// L_SC over a batch: forward every context once, pool positive and negative
// spans from it, questions forward alone. Returns loss and parameter grads.
std::pair<double, ToyEncoderParams> contrastive_batch_loss(const ToyEncoderParams& params,
                                                           const TrainBatch& batch,
                                                           double temperature,
                                                           bool literal_double_exp);

// One combined update: L = L_SC + L_MNTP (MNTP averaged over the batch's
// masked contexts). Throws non_finite_loss on divergence.
StepLosses train_step(ToyEncoderParams& params, AdamOptimizer& optimizer,
                      const TrainBatch& batch, std::span<const MaskedBatch> masked,
                      const TrainConfig& config);

struct TrainLogRow {
  std::size_t step = 0;
  double contrastive = 0.0;
  double mntp = 0.0;
  double total = 0.0;
  std::optional<double> retrieval_accuracy;
};

struct TrainOutcome {
  ToyEncoderParams params;
  Vocabulary vocab;
  std::vector<TrainLogRow> log;
  double final_accuracy = 0.0;
};

// Seeded shuffled mini-batch training over curated tuples, with periodic
// held-out retrieval accuracy (positive outranks all negatives by
// cosine-to-question).
TrainOutcome train(std::span<const CurationTuple> dataset, const TrainConfig& config,
                   const TokenCounter& counter = default_tokenizer());

// Held-out retrieval accuracy for a sample set under given parameters.
double retrieval_accuracy(const ToyEncoderParams& params, std::span<const TrainSample> samples);

// Tuple -> TrainSample conversion used by train() and the evaluators.
TrainSample make_train_sample(const CurationTuple& tuple, const Vocabulary& vocab,
                              const TokenCounter& counter);

}  // namespace cpc

#include "cpc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "cpc/error.hpp"
#include "cpc/rng.hpp"

namespace cpc {

Vocabulary::Vocabulary() {
  add("<unk>");
  add("<mask>");
}

int Vocabulary::add(std::string token) {
  const auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(tokens_.size());
  index_.emplace(token, id);
  tokens_.push_back(std::move(token));
  return id;
}

int Vocabulary::id_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? unk_id() : it->second;
}

std::vector<int> Vocabulary::ids_of(std::span<const std::string> tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id_of(t));
  return ids;
}

ToyEncoderParams ToyEncoderParams::init(std::size_t vocab, std::size_t dim, std::uint64_t seed) {
  ToyEncoderParams p;
  p.dim = dim;
  p.vocab = vocab;
  p.token_embedding.resize(vocab * dim);
  p.w1.resize(dim * dim);
  p.w2.resize(dim * dim);
  p.bias.assign(dim, 0.0);
  p.output_head.resize(dim * vocab);

  Rng rng(seed);
  const double mix_scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& v : p.token_embedding) v = rng.uniform(-0.1, 0.1);
  for (double& v : p.w1) v = rng.uniform(-mix_scale, mix_scale);
  for (double& v : p.w2) v = rng.uniform(-mix_scale, mix_scale);
  for (double& v : p.output_head) v = rng.uniform(-mix_scale, mix_scale);
  return p;
}

ToyEncoderParams ToyEncoderParams::zeros_like(const ToyEncoderParams& shape) {
  ToyEncoderParams p;
  p.dim = shape.dim;
  p.vocab = shape.vocab;
  p.token_embedding.assign(shape.token_embedding.size(), 0.0);
  p.w1.assign(shape.w1.size(), 0.0);
  p.w2.assign(shape.w2.size(), 0.0);
  p.bias.assign(shape.bias.size(), 0.0);
  p.output_head.assign(shape.output_head.size(), 0.0);
  return p;
}

std::size_t ToyEncoderParams::parameter_count() const {
  return token_embedding.size() + w1.size() + w2.size() + bias.size() + output_head.size();
}

std::vector<std::vector<double>*> ToyEncoderParams::tensors() {
  return {&token_embedding, &w1, &w2, &bias, &output_head};
}

std::vector<const std::vector<double>*> ToyEncoderParams::tensors() const {
  return {&token_embedding, &w1, &w2, &bias, &output_head};
}

EncoderForward encoder_forward(const ToyEncoderParams& params, std::span<const int> ids) {
  if (ids.empty()) {
    throw Error(ErrorCode::empty_context, "encoder forward over zero tokens");
  }
  const std::size_t d = params.dim;
  const std::size_t n = ids.size();
  EncoderForward f;
  f.ids.assign(ids.begin(), ids.end());
  f.embedded.resize(n * d);
  f.mean.assign(d, 0.0);
  f.hidden.resize(n * d);

  for (std::size_t t = 0; t < n; ++t) {
    const int id = ids[t];
    if (id < 0 || static_cast<std::size_t>(id) >= params.vocab) {
      throw Error(ErrorCode::invalid_argument, "token id out of vocabulary range");
    }
    const double* row = params.token_embedding.data() + static_cast<std::size_t>(id) * d;
    for (std::size_t c = 0; c < d; ++c) {
      f.embedded[t * d + c] = row[c];
      f.mean[c] += row[c];
    }
  }
  for (std::size_t c = 0; c < d; ++c) f.mean[c] /= static_cast<double>(n);

  for (std::size_t t = 0; t < n; ++t) {
    const double* h = f.embedded.data() + t * d;
    for (std::size_t r = 0; r < d; ++r) {
      double a = params.bias[r];
      const double* w1_row = params.w1.data() + r * d;
      const double* w2_row = params.w2.data() + r * d;
      for (std::size_t c = 0; c < d; ++c) a += w1_row[c] * h[c] + w2_row[c] * f.mean[c];
      f.hidden[t * d + r] = std::tanh(a);
    }
  }
  return f;
}

void encoder_backward(const ToyEncoderParams& params, const EncoderForward& forward,
                      const std::vector<double>& d_hidden, ToyEncoderParams& grads) {
  const std::size_t d = params.dim;
  const std::size_t n = forward.ids.size();

  std::vector<double> d_embedded(n * d, 0.0);
  std::vector<double> d_mean(d, 0.0);

  for (std::size_t t = 0; t < n; ++t) {
    const double* h = forward.embedded.data() + t * d;
    const double* z = forward.hidden.data() + t * d;
    const double* dz = d_hidden.data() + t * d;
    for (std::size_t r = 0; r < d; ++r) {
      const double da = dz[r] * (1.0 - z[r] * z[r]);
      if (da == 0.0) continue;
      grads.bias[r] += da;
      double* gw1 = grads.w1.data() + r * d;
      double* gw2 = grads.w2.data() + r * d;
      const double* w1_row = params.w1.data() + r * d;
      const double* w2_row = params.w2.data() + r * d;
      for (std::size_t c = 0; c < d; ++c) {
        gw1[c] += da * h[c];
        gw2[c] += da * forward.mean[c];
        d_embedded[t * d + c] += da * w1_row[c];
        d_mean[c] += da * w2_row[c];
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < n; ++t) {
    double* grow =
        grads.token_embedding.data() + static_cast<std::size_t>(forward.ids[t]) * d;
    for (std::size_t c = 0; c < d; ++c) {
      grow[c] += d_embedded[t * d + c] + d_mean[c] * inv_n;
    }
  }
}

MaskedBatch mask_tokens(std::span<const int> ids, double fraction, std::uint64_t seed,
                        int mask_id) {
  if (ids.empty()) {
    throw Error(ErrorCode::invalid_argument, "mask_tokens over an empty sequence");
  }
  const auto k = static_cast<std::size_t>(
      std::lround(fraction * static_cast<double>(ids.size())));
  MaskedBatch out;
  out.ids.assign(ids.begin(), ids.end());
  Rng rng(seed);
  out.positions = rng.sample_indices(ids.size(), k);
  std::sort(out.positions.begin(), out.positions.end());
  out.original_ids.reserve(out.positions.size());
  for (std::size_t pos : out.positions) {
    out.original_ids.push_back(out.ids[pos]);
    out.ids[pos] = mask_id;
  }
  return out;
}

std::vector<std::vector<NegativeRef>> build_in_batch_negatives(std::size_t batch_size,
                                                               std::size_t negatives_per_sample) {
  if (batch_size < 2) {
    throw Error(ErrorCode::invalid_argument, "in-batch negatives need batch size >= 2");
  }
  std::vector<std::vector<NegativeRef>> sets(batch_size);
  for (std::size_t b = 0; b < batch_size; ++b) {
    auto& set = sets[b];
    set.reserve((batch_size - 1) * (1 + negatives_per_sample) + negatives_per_sample);
    for (std::size_t i = 0; i < batch_size; ++i) {
      if (i == b) continue;
      set.push_back({true, i, 0});
    }
    for (std::size_t i = 0; i < batch_size; ++i) {
      if (i == b) continue;
      for (std::size_t m = 0; m < negatives_per_sample; ++m) set.push_back({false, i, m});
    }
    for (std::size_t m = 0; m < negatives_per_sample; ++m) set.push_back({false, b, m});
  }
  return sets;
}

namespace {

double vector_norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// cos(a, b) with gradient accumulation: d_a += scale * dcos/da, same for b.
double cosine_with_grad(std::span<const double> a, std::span<const double> b, double scale,
                        std::vector<double>& d_a, std::vector<double>& d_b) {
  const double na = vector_norm(a);
  const double nb = vector_norm(b);
  const double ab = dot(a, b);
  const double c = ab / (na * nb);
  if (scale != 0.0) {
    const double inv = 1.0 / (na * nb);
    for (std::size_t i = 0; i < a.size(); ++i) {
      d_a[i] += scale * (b[i] * inv - c * a[i] / (na * na));
      d_b[i] += scale * (a[i] * inv - c * b[i] / (nb * nb));
    }
  }
  return c;
}

double plain_cosine(std::span<const double> a, std::span<const double> b) {
  return dot(a, b) / (vector_norm(a) * vector_norm(b));
}

struct PooledSpan {
  std::vector<double> unit;  // xi
  double norm = 0.0;         // |mean| before normalization
  std::size_t begin = 0, end = 0;
};

PooledSpan pool_raw(const std::vector<double>& hidden, std::size_t d, std::size_t begin,
                    std::size_t end) {
  PooledSpan p;
  p.begin = begin;
  p.end = end;
  p.unit.assign(d, 0.0);
  for (std::size_t t = begin; t <= end; ++t) {
    for (std::size_t c = 0; c < d; ++c) p.unit[c] += hidden[t * d + c];
  }
  const double span = static_cast<double>(end - begin + 1);
  for (double& v : p.unit) v /= span;
  p.norm = vector_norm(p.unit);
  if (p.norm < 1e-12) {
    throw Error(ErrorCode::degenerate_span, "pooled span has vanishing norm");
  }
  for (double& v : p.unit) v /= p.norm;
  return p;
}

// d(unit)/d(hidden) through normalize-of-mean.
void pool_backward(const PooledSpan& p, std::span<const double> d_unit, std::size_t d,
                   std::vector<double>& d_hidden) {
  const double along = dot(p.unit, d_unit);
  const double span = static_cast<double>(p.end - p.begin + 1);
  for (std::size_t c = 0; c < d; ++c) {
    const double d_mean = (d_unit[c] - p.unit[c] * along) / p.norm;
    const double per_token = d_mean / span;
    for (std::size_t t = p.begin; t <= p.end; ++t) d_hidden[t * d + c] += per_token;
  }
}

}  // namespace

ContrastiveResult contrastive_loss(const BatchEmbeddings& batch, double temperature,
                                   bool literal_double_exp) {
  const std::size_t b_count = batch.questions.size();
  if (b_count < 2 || batch.positives.size() != b_count || batch.negatives.size() != b_count) {
    throw Error(ErrorCode::invalid_argument, "contrastive batch needs B >= 2 aligned samples");
  }
  const std::size_t m = batch.negatives.front().size();
  for (const auto& negs : batch.negatives) {
    if (negs.size() != m) {
      throw Error(ErrorCode::invalid_argument, "every sample needs the same negative count");
    }
  }
  if (!literal_double_exp && temperature <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "temperature must be positive");
  }

  const auto refs = build_in_batch_negatives(b_count, m);
  const std::size_t dim = batch.questions.front().size();

  ContrastiveResult res;
  res.d_questions.assign(b_count, std::vector<double>(dim, 0.0));
  res.d_positives.assign(b_count, std::vector<double>(dim, 0.0));
  res.d_negatives.assign(b_count, std::vector<std::vector<double>>(m, std::vector<double>(dim, 0.0)));

  const double inv_b = 1.0 / static_cast<double>(b_count);

  for (std::size_t b = 0; b < b_count; ++b) {
    const auto& q = batch.questions[b];
    const auto& neg_set = refs[b];

    const auto ref_vector = [&](const NegativeRef& r) -> const std::vector<double>& {
      return r.other_positive ? batch.positives[r.sample] : batch.negatives[r.sample][r.negative];
    };

    // Scores: cos/T by default, exp(cos) in literal mode.
    const double cos_p = plain_cosine(q, batch.positives[b]);
    std::vector<double> cos_n(neg_set.size());
    for (std::size_t r = 0; r < neg_set.size(); ++r) cos_n[r] = plain_cosine(q, ref_vector(neg_set[r]));

    const auto score = [&](double c) { return literal_double_exp ? std::exp(c) : c / temperature; };
    const auto dscore = [&](double c) { return literal_double_exp ? std::exp(c) : 1.0 / temperature; };

    const double s_p = score(cos_p);
    double mx = s_p;
    std::vector<double> s_n(neg_set.size());
    for (std::size_t r = 0; r < neg_set.size(); ++r) {
      s_n[r] = score(cos_n[r]);
      mx = std::max(mx, s_n[r]);
    }
    double z = std::exp(s_p - mx);
    for (double s : s_n) z += std::exp(s - mx);
    const double sample_loss = mx + std::log(z) - s_p;
    res.per_sample.push_back(sample_loss);
    res.loss += sample_loss * inv_b;

    const double pi_p = std::exp(s_p - mx) / z;
    // dL/ds_p = pi_p - 1, dL/ds_n = pi_n; chain through the score transform.
    {
      const double scale = inv_b * (pi_p - 1.0) * dscore(cos_p);
      cosine_with_grad(q, batch.positives[b], scale, res.d_questions[b], res.d_positives[b]);
    }
    for (std::size_t r = 0; r < neg_set.size(); ++r) {
      const double pi_n = std::exp(s_n[r] - mx) / z;
      const double scale = inv_b * pi_n * dscore(cos_n[r]);
      const NegativeRef& ref = neg_set[r];
      auto& d_ref = ref.other_positive ? res.d_positives[ref.sample]
                                       : res.d_negatives[ref.sample][ref.negative];
      cosine_with_grad(q, ref_vector(ref), scale, res.d_questions[b], d_ref);
    }
  }
  return res;
}

MntpResult mntp_loss(const ToyEncoderParams& params, const MaskedBatch& masked,
                     bool same_position) {
  const std::size_t d = params.dim;
  const std::size_t v = params.vocab;

  std::size_t predictable = 0;
  for (std::size_t pos : masked.positions) {
    if (same_position || pos >= 1) ++predictable;
  }
  if (predictable == 0) {
    throw Error(ErrorCode::invalid_argument,
                "no predictable masked position (every mask is at position 0)");
  }

  const EncoderForward f = encoder_forward(params, masked.ids);

  MntpResult res;
  res.grads = ToyEncoderParams::zeros_like(params);
  res.predicted_positions = predictable;
  const double scale = 1.0 / static_cast<double>(predictable);

  std::vector<double> d_hidden(masked.ids.size() * d, 0.0);
  std::vector<double> logits(v), probs(v);

  for (std::size_t k = 0; k < masked.positions.size(); ++k) {
    const std::size_t pos = masked.positions[k];
    if (!same_position && pos < 1) continue;
    const int target = masked.original_ids[k];
    const std::size_t source = same_position ? pos : pos - 1;
    const double* h = f.hidden.data() + source * d;

    double mx = -1e300;
    for (std::size_t w = 0; w < v; ++w) {
      double a = 0.0;
      for (std::size_t c = 0; c < d; ++c) a += params.output_head[c * v + w] * h[c];
      logits[w] = a;
      mx = std::max(mx, a);
    }
    double z = 0.0;
    for (std::size_t w = 0; w < v; ++w) {
      probs[w] = std::exp(logits[w] - mx);
      z += probs[w];
    }
    for (std::size_t w = 0; w < v; ++w) probs[w] /= z;
    res.loss += -std::log(probs[static_cast<std::size_t>(target)]) * scale;

    // dlogits = (probs - onehot) * scale
    for (std::size_t w = 0; w < v; ++w) {
      const double dl = (probs[w] - (static_cast<int>(w) == target ? 1.0 : 0.0)) * scale;
      if (dl == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) {
        res.grads.output_head[c * v + w] += h[c] * dl;
        d_hidden[source * d + c] += params.output_head[c * v + w] * dl;
      }
    }
  }

  encoder_backward(params, f, d_hidden, res.grads);
  return res;
}

AdamOptimizer::AdamOptimizer(const ToyEncoderParams& shape, double beta1, double beta2,
                             double epsilon)
    : first_(ToyEncoderParams::zeros_like(shape)),
      second_(ToyEncoderParams::zeros_like(shape)),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon) {}

void AdamOptimizer::update(ToyEncoderParams& params, const ToyEncoderParams& grads,
                           double learning_rate) {
  ++step_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  auto p_tensors = params.tensors();
  auto g_tensors = grads.tensors();
  auto m_tensors = first_.tensors();
  auto v_tensors = second_.tensors();
  for (std::size_t t = 0; t < p_tensors.size(); ++t) {
    auto& p = *p_tensors[t];
    const auto& g = *g_tensors[t];
    auto& m = *m_tensors[t];
    auto& v = *v_tensors[t];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      p[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + epsilon_);
    }
  }
}

std::pair<double, ToyEncoderParams> contrastive_batch_loss(const ToyEncoderParams& params,
                                                           const TrainBatch& batch,
                                                           double temperature,
                                                           bool literal_double_exp) {
  const std::size_t b_count = batch.samples.size();
  const std::size_t d = params.dim;

  std::vector<EncoderForward> ctx_forwards(b_count), q_forwards(b_count);
  std::vector<PooledSpan> pos_pools(b_count), q_pools(b_count);
  std::vector<std::vector<PooledSpan>> neg_pools(b_count);

  BatchEmbeddings emb;
  emb.questions.resize(b_count);
  emb.positives.resize(b_count);
  emb.negatives.resize(b_count);

  for (std::size_t b = 0; b < b_count; ++b) {
    const TrainSample& s = batch.samples[b];
    ctx_forwards[b] = encoder_forward(params, s.context_ids);
    q_forwards[b] = encoder_forward(params, s.question_ids);
    pos_pools[b] = pool_raw(ctx_forwards[b].hidden, d, s.positive_span.first, s.positive_span.second);
    q_pools[b] = pool_raw(q_forwards[b].hidden, d, 0, s.question_ids.size() - 1);
    emb.positives[b] = pos_pools[b].unit;
    emb.questions[b] = q_pools[b].unit;
    for (const auto& span : s.negative_spans) {
      neg_pools[b].push_back(pool_raw(ctx_forwards[b].hidden, d, span.first, span.second));
      emb.negatives[b].push_back(neg_pools[b].back().unit);
    }
  }

  const ContrastiveResult res = contrastive_loss(emb, temperature, literal_double_exp);

  ToyEncoderParams grads = ToyEncoderParams::zeros_like(params);
  for (std::size_t b = 0; b < b_count; ++b) {
    const TrainSample& s = batch.samples[b];
    std::vector<double> d_ctx(s.context_ids.size() * d, 0.0);
    pool_backward(pos_pools[b], res.d_positives[b], d, d_ctx);
    for (std::size_t m = 0; m < neg_pools[b].size(); ++m) {
      pool_backward(neg_pools[b][m], res.d_negatives[b][m], d, d_ctx);
    }
    encoder_backward(params, ctx_forwards[b], d_ctx, grads);

    std::vector<double> d_q(s.question_ids.size() * d, 0.0);
    pool_backward(q_pools[b], res.d_questions[b], d, d_q);
    encoder_backward(params, q_forwards[b], d_q, grads);
  }
  return {res.loss, std::move(grads)};
}

StepLosses train_step(ToyEncoderParams& params, AdamOptimizer& optimizer,
                      const TrainBatch& batch, std::span<const MaskedBatch> masked,
                      const TrainConfig& config) {
  if (batch.samples.size() != masked.size()) {
    throw Error(ErrorCode::invalid_argument, "one masked context per batch sample required");
  }

  auto [sc_loss, grads] =
      contrastive_batch_loss(params, batch, config.temperature, config.literal_double_exp);

  // MNTP averaged over samples that have at least one predictable position.
  double mntp_total = 0.0;
  std::size_t mntp_samples = 0;
  std::vector<MntpResult> mntp_results;
  for (const MaskedBatch& mb : masked) {
    bool predictable = false;
    for (std::size_t pos : mb.positions) {
      if (config.mntp_same_position || pos >= 1) {
        predictable = true;
        break;
      }
    }
    if (!predictable) continue;
    mntp_results.push_back(mntp_loss(params, mb, config.mntp_same_position));
    mntp_total += mntp_results.back().loss;
    ++mntp_samples;
  }
  double mntp_mean = 0.0;
  if (mntp_samples > 0) {
    mntp_mean = mntp_total / static_cast<double>(mntp_samples);
    const double scale = 1.0 / static_cast<double>(mntp_samples);
    auto g_tensors = grads.tensors();
    for (const MntpResult& r : mntp_results) {
      auto r_tensors = r.grads.tensors();
      for (std::size_t t = 0; t < g_tensors.size(); ++t) {
        auto& g = *g_tensors[t];
        const auto& s = *r_tensors[t];
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += s[i] * scale;
      }
    }
  }

  StepLosses losses{sc_loss, mntp_mean, sc_loss + mntp_mean};
  if (!std::isfinite(losses.total)) {
    throw Error(ErrorCode::non_finite_loss,
                "training diverged: L_SC=" + std::to_string(sc_loss) +
                    " L_MNTP=" + std::to_string(mntp_mean));
  }
  optimizer.update(params, grads, config.learning_rate);
  return losses;
}

TrainSample make_train_sample(const CurationTuple& tuple, const Vocabulary& vocab,
                              const TokenCounter& counter) {
  const Document doc = Document::from_text(tuple.context, counter);
  const auto span_of = [&](std::size_t sentence_index) {
    if (sentence_index >= doc.sentences.size()) {
      throw Error(ErrorCode::validation, "sentence index out of range for context");
    }
    const Sentence& s = doc.sentences[sentence_index];
    return std::make_pair(s.token_begin, s.token_end);
  };

  TrainSample sample;
  sample.context_ids = vocab.ids_of(doc.token_texts());
  const std::vector<std::string> q_tokens = counter.token_texts(tuple.question);
  if (q_tokens.empty()) {
    throw Error(ErrorCode::empty_question, "tuple question has no tokens");
  }
  sample.question_ids = vocab.ids_of(q_tokens);
  sample.positive_span = span_of(tuple.positive_index);
  for (std::size_t n : tuple.negative_indices) sample.negative_spans.push_back(span_of(n));
  return sample;
}

double retrieval_accuracy(const ToyEncoderParams& params, std::span<const TrainSample> samples) {
  if (samples.empty()) return 0.0;
  const std::size_t d = params.dim;
  std::size_t correct = 0;
  for (const TrainSample& s : samples) {
    const EncoderForward ctx = encoder_forward(params, s.context_ids);
    const EncoderForward q = encoder_forward(params, s.question_ids);
    const PooledSpan q_pool = pool_raw(q.hidden, d, 0, s.question_ids.size() - 1);
    const PooledSpan pos = pool_raw(ctx.hidden, d, s.positive_span.first, s.positive_span.second);
    const double pos_score = dot(q_pool.unit, pos.unit);
    bool ok = true;
    for (const auto& span : s.negative_spans) {
      const PooledSpan neg = pool_raw(ctx.hidden, d, span.first, span.second);
      if (dot(q_pool.unit, neg.unit) >= pos_score) {
        ok = false;
        break;
      }
    }
    if (ok) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

TrainOutcome train(std::span<const CurationTuple> dataset, const TrainConfig& config,
                   const TokenCounter& counter) {
  if (dataset.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "training needs at least two tuples");
  }

  Vocabulary vocab;
  for (const CurationTuple& t : dataset) {
    const Document doc = Document::from_text(t.context, counter);
    for (const Token& token : doc.tokens) vocab.add(token.text);
    for (const std::string& token : counter.token_texts(t.question)) vocab.add(token);
  }

  std::vector<TrainSample> samples;
  samples.reserve(dataset.size());
  for (const CurationTuple& t : dataset) samples.push_back(make_train_sample(t, vocab, counter));

  // Seeded holdout split; training keeps at least two samples.
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng split_rng(Rng::mix(config.seed, 0x5117));
  split_rng.shuffle(order);
  std::size_t hold_count = static_cast<std::size_t>(
      std::floor(config.holdout_fraction * static_cast<double>(samples.size())));
  if (samples.size() - hold_count < 2) hold_count = samples.size() - 2;

  std::vector<TrainSample> held, training;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < hold_count ? held : training).push_back(samples[order[i]]);
  }
  const std::span<const TrainSample> eval_set =
      held.empty() ? std::span<const TrainSample>(training) : std::span<const TrainSample>(held);

  TrainOutcome outcome;
  outcome.vocab = vocab;
  outcome.params = ToyEncoderParams::init(vocab.size(), config.dim, Rng::mix(config.seed, 0x1417));
  AdamOptimizer optimizer(outcome.params);

  std::deque<std::size_t> queue;
  std::size_t epoch = 0;
  const auto refill = [&] {
    std::vector<std::size_t> idx(training.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng epoch_rng(Rng::mix(config.seed, 0xe90c + epoch));
    epoch_rng.shuffle(idx);
    for (std::size_t i : idx) queue.push_back(i);
    ++epoch;
  };

  const std::size_t batch_size = std::max<std::size_t>(2, config.batch_size);
  for (std::size_t step = 1; step <= config.steps; ++step) {
    TrainBatch batch;
    while (batch.samples.size() < batch_size) {
      if (queue.empty()) refill();
      batch.samples.push_back(training[queue.front()]);
      queue.pop_front();
    }
    std::vector<MaskedBatch> masked;
    masked.reserve(batch.samples.size());
    for (std::size_t i = 0; i < batch.samples.size(); ++i) {
      masked.push_back(mask_tokens(batch.samples[i].context_ids, config.mask_fraction,
                                   Rng::mix(config.seed, Rng::mix(step, i)), vocab.mask_id()));
    }
    const StepLosses losses = train_step(outcome.params, optimizer, batch, masked, config);

    TrainLogRow row{step, losses.contrastive, losses.mntp, losses.total, std::nullopt};
    if (config.eval_every > 0 && (step % config.eval_every == 0 || step == config.steps)) {
      row.retrieval_accuracy = retrieval_accuracy(outcome.params, eval_set);
      outcome.final_accuracy = *row.retrieval_accuracy;
    }
    outcome.log.push_back(row);
  }
  if (config.steps == 0) {
    outcome.final_accuracy = retrieval_accuracy(outcome.params, eval_set);
  }
  return outcome;
}

}  // namespace cpc

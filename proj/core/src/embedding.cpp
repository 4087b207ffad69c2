#include "cpc/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "cpc/error.hpp"

namespace cpc {

Embedding Embedding::normalized(std::vector<double> values) {
  double sq = 0.0;
  for (double v : values) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm < 1e-12) {
    throw Error(ErrorCode::degenerate_span, "vector norm below 1e-12, cosine undefined");
  }
  for (double& v : values) v /= norm;
  return Embedding{std::move(values)};
}

TokenEmbeddings TokenEmbeddings::zeros(std::size_t count, std::size_t dim) {
  TokenEmbeddings out;
  out.dim = dim;
  out.data.assign(count * dim, 0.0);
  return out;
}

TokenEmbeddings TokenEmbeddings::from_rows(const std::vector<std::vector<double>>& rows) {
  TokenEmbeddings out;
  if (rows.empty()) return out;
  out.dim = rows.front().size();
  out.data.reserve(rows.size() * out.dim);
  for (const auto& row : rows) {
    if (row.size() != out.dim) {
      throw Error(ErrorCode::dimension_mismatch, "ragged token embedding rows");
    }
    out.data.insert(out.data.end(), row.begin(), row.end());
  }
  return out;
}

Embedding pool_span(const TokenEmbeddings& emb, std::size_t i, std::size_t j) {
  if (i > j || j >= emb.size()) {
    throw Error(ErrorCode::invalid_argument, "span indices out of range");
  }
  std::vector<double> mean(emb.dim, 0.0);
  for (std::size_t t = i; t <= j; ++t) {
    const std::span<const double> z = emb.vector(t);
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += z[d];
  }
  const double span = static_cast<double>(j - i + 1);
  for (double& v : mean) v /= span;
  return Embedding::normalized(std::move(mean));
}

double cosine(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "cosine of embeddings with different dims");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t d = 0; d < a.values.size(); ++d) {
    dot += a.values[d] * b.values[d];
    na += a.values[d] * a.values[d];
    nb += b.values[d] * b.values[d];
  }
  if (na <= 0.0 || nb <= 0.0) {
    throw Error(ErrorCode::degenerate_span, "cosine of a zero vector");
  }
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace cpc

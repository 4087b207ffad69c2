#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cpc {

// Unit-norm vector (within 1e-6). Construct through normalized() so the
// invariant holds for every embedding that leaves a provider.
struct Embedding {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }

  // Normalizes in place; throws degenerate_span if the norm is below 1e-12.
  static Embedding normalized(std::vector<double> values);
};

// One vector per token, stored row-major in a single buffer so a document
// embedding is one allocation regardless of length.
struct TokenEmbeddings {
  std::vector<double> data;  // size() * dim values
  std::size_t dim = 0;

  std::size_t size() const { return dim == 0 ? 0 : data.size() / dim; }

  std::span<const double> vector(std::size_t t) const {
    return {data.data() + t * dim, dim};
  }
  std::span<double> vector(std::size_t t) {
    return {data.data() + t * dim, dim};
  }

  static TokenEmbeddings zeros(std::size_t count, std::size_t dim);
  static TokenEmbeddings from_rows(const std::vector<std::vector<double>>& rows);
};

// norm(mean(Z_i..Z_j)), inclusive span into whole-document token embeddings.
Embedding pool_span(const TokenEmbeddings& emb, std::size_t i, std::size_t j);

// Cosine similarity, clamped to [-1, 1]. Equals the dot product for
// unit-norm inputs; computed in full so it is exact for any vectors.
double cosine(const Embedding& a, const Embedding& b);

}  // namespace cpc

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpc/providers.hpp"
#include "cpc/segmentation.hpp"

namespace cpc {

struct CurationConfig {
  double consistency_threshold = 0.70;  // dictionary-word fraction per sentence
  double coverage_fraction = 0.30;      // minimum negative-candidate coverage
  double kl_threshold = 4e-3;           // KL filter cutoff
  std::size_t negatives_per_tuple = 2;  // M
  std::uint64_t seed = 0;
  std::size_t max_positives_per_document = 4;
  bool condition_on_question = true;  // include the question in the KL conditioning prefix
};

struct TupleScores {
  double eta = 0.0;
  std::vector<double> neg_cos;
  std::vector<double> neg_kl;
};

struct CurationTuple {
  std::string doc_id;
  std::string context;  // original document text
  std::string question;
  std::string answer;
  std::size_t positive_index = 0;            // sentence index into the context
  std::vector<std::size_t> negative_indices;  // exactly M, pairwise distinct
  TupleScores scores;
};

struct QaPair {
  std::string question;
  std::string answer;
};

// True iff at least theta of the whitespace-delimited words are in the
// bundled English wordlist (lowercased, surrounding punctuation stripped)
// and every character is ASCII. A sentence with no words is not consistent.
bool is_consistent_sentence(const Sentence& sentence, double threshold);
bool is_consistent_sentence(std::string_view text, double threshold);

// Question-generation prompt, rendered with the whole context and the
// positive sentence in double brackets.
std::string render_question_prompt(const Document& context, const Sentence& positive);

// Verification prompt over the positive sentence alone. The demonstration
// block is fixed by default and overridable for testing.
std::string render_verification_prompt(const Sentence& positive, const QaPair& pair,
                                       std::string_view demonstration = {});

// Parses alternating "Q:"/"A:" lines; incomplete trailing fragments drop.
// Throws parse when no complete pair is present.
std::vector<QaPair> parse_qa_response(std::string_view response);

std::vector<QaPair> generate_qa(GenerationProvider& generator, const Document& context,
                                const Sentence& positive);

// keep == true iff the response's final Yes/No token is "No" (the question
// is NOT answerable from the sentence alone). Throws ambiguous_verdict when
// the response ends with neither word.
bool verify_qa(GenerationProvider& generator, const Sentence& positive, const QaPair& pair);
bool parse_verification_verdict(std::string_view response);

struct NegativeMining {
  double eta = 0.0;
  std::vector<std::size_t> candidates;  // sentence indices, ascending
  std::vector<double> candidate_cos;    // cosine-to-question per candidate
  bool coverage_excluded = false;
};

// Plain-embedding candidate mining: candidates are sentences strictly below
// eta = cos(E_positive, E_question); the tuple is excluded when fewer than
// beta * K sentences qualify.
NegativeMining mine_negative_candidates(const Document& context, std::size_t positive_index,
                                        std::string_view question, const Embedder& plain_embedder,
                                        double coverage_fraction,
                                        const TokenCounter& counter = default_tokenizer());

// Sum p_k ln(p_k / q_k) with 0 ln(0/q) = 0; q gets 1e-10 additive smoothing
// (renormalized) so sparse toy providers cannot produce infinities.
double kl_divergence(std::span<const double> p, std::span<const double> q);

struct KlVerdict {
  double score = 0.0;  // mean per-position KL over answer tokens
  bool keep = false;   // score within the threshold
};

// KL(P_C, P_{C w/o Neg}) averaged over answer positions, where the negative
// sentence is removed from the conditioning context.
KlVerdict kl_filter(const DensityProvider& density, const Document& context,
                    std::size_t negative_index, std::string_view question,
                    std::string_view answer, double kl_threshold, bool condition_on_question = true);

struct CorpusDoc {
  std::string id;
  std::string text;
};

struct CurationProviders {
  const Embedder* plain_embedder = nullptr;
  GenerationProvider* generator = nullptr;
  // Built per document so toy densities fix their vocabulary on its text.
  std::function<std::unique_ptr<DensityProvider>(const Document&)> density_factory;
};

// Full pipeline: consistent positives -> question generation -> verification
// -> candidate mining -> KL filter -> seeded choice of M survivors. Tuples
// stream to `emit` in document order; per-tuple failures go to `log` and
// never abort the stream.
void build_dataset(std::span<const CorpusDoc> corpus, const CurationConfig& config,
                   const CurationProviders& providers,
                   const std::function<void(const CurationTuple&)>& emit,
                   const std::function<void(const std::string&)>& log = {},
                   const TokenCounter& counter = default_tokenizer());

std::vector<CurationTuple> build_dataset(std::span<const CorpusDoc> corpus,
                                         const CurationConfig& config,
                                         const CurationProviders& providers,
                                         const TokenCounter& counter = default_tokenizer());

}  // namespace cpc

#include "cpc/curation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "cpc/error.hpp"
#include "cpc/rng.hpp"
#include "cpc/wordlist.hpp"

namespace cpc {

namespace {

constexpr std::string_view kQuestionPromptA =
    "Here is a text to consider: TEXT: \"";
constexpr std::string_view kQuestionPromptB =
    "\"\nRead the sentence in double brackets, namely, [[";
constexpr std::string_view kQuestionPromptC =
    "]].\n"
    "Ask questions to this sentence, and make sure the question is not answerable "
    "from this sentence alone without knowing the context.\n"
    "Reply in this format:\n"
    "Q: {question 1}\n"
    "A: {answer 1}\n"
    "Q: {question 2}\n"
    "A: {answer 2}";

constexpr std::string_view kVerificationHeader =
    "You are given a piece of text, a question and an answer. Verify whether it is "
    "possible to derive such an answer by considering only the given piece of text "
    "(you should rely only on the piece of text). Think step by step and finish your "
    "thoughts with one word: \"Yes\" or \"No\". Answer \"Yes\" if and only if ALL the "
    "necessary information is contained in the text. If anything is missing, then "
    "state what is missing and answer \"No\". Answer \"Yes\" ONLY if there is no such "
    "information in the answer that is missing in the text. Otherwise, answer \"No\"!!";

constexpr std::string_view kDefaultDemonstration =
    "Text: The bridge was finally completed in 1932.\n"
    "Question: Who designed the bridge that was completed in 1932?\n"
    "Answer: John Bradfield\n"
    "Verification result: The text gives the completion year but never names a "
    "designer, so the designer is missing. No";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower_stripped(std::string_view word) {
  std::size_t begin = 0, end = word.size();
  while (begin < end && !std::isalnum(static_cast<unsigned char>(word[begin]))) ++begin;
  while (end > begin && !std::isalnum(static_cast<unsigned char>(word[end - 1]))) --end;
  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(word[i])));
  }
  return out;
}

}  // namespace

bool is_consistent_sentence(std::string_view text, double threshold) {
  for (unsigned char c : text) {
    if (c > 0x7f) return false;
  }
  std::size_t words = 0, hits = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      ++words;
      if (in_english_wordlist(lower_stripped(text.substr(i, j - i)))) ++hits;
    }
    i = j;
  }
  if (words == 0) return false;
  return static_cast<double>(hits) >= threshold * static_cast<double>(words);
}

bool is_consistent_sentence(const Sentence& sentence, double threshold) {
  return is_consistent_sentence(sentence.text, threshold);
}

std::string render_question_prompt(const Document& context, const Sentence& positive) {
  std::string prompt;
  prompt.reserve(context.text.size() + positive.text.size() + 256);
  prompt += kQuestionPromptA;
  prompt += context.text;
  prompt += kQuestionPromptB;
  prompt += positive.text;
  prompt += kQuestionPromptC;
  return prompt;
}

std::string render_verification_prompt(const Sentence& positive, const QaPair& pair,
                                       std::string_view demonstration) {
  std::string prompt;
  prompt += kVerificationHeader;
  prompt += '\n';
  prompt += demonstration.empty() ? kDefaultDemonstration : demonstration;
  prompt += "\nText: ";
  prompt += positive.text;
  prompt += "\nQuestion: ";
  prompt += pair.question;
  prompt += "\nAnswer: ";
  prompt += pair.answer;
  prompt += "\nVerification result: Yes/No";
  return prompt;
}

std::vector<QaPair> parse_qa_response(std::string_view response) {
  std::vector<QaPair> pairs;
  std::optional<std::string> pending;
  std::size_t pos = 0;
  while (pos <= response.size()) {
    std::size_t eol = response.find('\n', pos);
    if (eol == std::string_view::npos) eol = response.size();
    const std::string_view line = trim(response.substr(pos, eol - pos));
    if (line.rfind("Q:", 0) == 0) {
      pending = std::string(trim(line.substr(2)));
    } else if (line.rfind("A:", 0) == 0 && pending) {
      const std::string_view answer = trim(line.substr(2));
      if (!pending->empty() && !answer.empty()) {
        pairs.push_back({std::move(*pending), std::string(answer)});
      }
      pending.reset();
    }
    if (eol == response.size()) break;
    pos = eol + 1;
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::parse, "no complete Q:/A: pair in generator response");
  }
  return pairs;
}

std::vector<QaPair> generate_qa(GenerationProvider& generator, const Document& context,
                                const Sentence& positive) {
  return parse_qa_response(generator.generate(render_question_prompt(context, positive)));
}

bool parse_verification_verdict(std::string_view response) {
  // Last word of the response, trailing punctuation ignored.
  std::size_t end = response.size();
  const auto is_word_char = [](char c) { return std::isalpha(static_cast<unsigned char>(c)); };
  while (end > 0 && !is_word_char(response[end - 1])) --end;
  std::size_t begin = end;
  while (begin > 0 && is_word_char(response[begin - 1])) --begin;
  std::string word(response.substr(begin, end - begin));
  for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (word == "no") return true;    // not answerable from the sentence alone: keep
  if (word == "yes") return false;  // fully answerable: discard
  throw Error(ErrorCode::ambiguous_verdict, "verification response ends with neither Yes nor No");
}

bool verify_qa(GenerationProvider& generator, const Sentence& positive, const QaPair& pair) {
  return parse_verification_verdict(
      generator.generate(render_verification_prompt(positive, pair)));
}

NegativeMining mine_negative_candidates(const Document& context, std::size_t positive_index,
                                        std::string_view question, const Embedder& plain_embedder,
                                        double coverage_fraction, const TokenCounter& counter) {
  const std::size_t k = context.sentences.size();
  if (k < 2) {
    throw Error(ErrorCode::invalid_argument, "negative mining needs at least two sentences");
  }
  if (positive_index >= k) {
    throw Error(ErrorCode::invalid_argument, "positive index out of range");
  }
  const Embedding question_emb = embed_question(plain_embedder, question, counter);
  std::vector<double> similarity(k);
  for (std::size_t i = 0; i < k; ++i) {
    similarity[i] =
        cosine(embed_sentence(plain_embedder, context.sentences[i].text, counter), question_emb);
  }

  NegativeMining mining;
  mining.eta = similarity[positive_index];
  for (std::size_t j = 0; j < k; ++j) {
    if (j == positive_index) continue;
    if (similarity[j] < mining.eta) {
      mining.candidates.push_back(j);
      mining.candidate_cos.push_back(similarity[j]);
    }
  }
  mining.coverage_excluded =
      static_cast<double>(mining.candidates.size()) < coverage_fraction * static_cast<double>(k);
  return mining;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::dimension_mismatch, "KL of distributions with different sizes");
  }
  constexpr double epsilon = 1e-10;
  const double renorm = 1.0 + epsilon * static_cast<double>(q.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    const double smoothed = (q[k] + epsilon) / renorm;
    sum += p[k] * std::log(p[k] / smoothed);
  }
  return sum;
}

KlVerdict kl_filter(const DensityProvider& density, const Document& context,
                    std::size_t negative_index, std::string_view question,
                    std::string_view answer, double kl_threshold, bool condition_on_question) {
  if (negative_index >= context.sentences.size()) {
    throw Error(ErrorCode::invalid_argument, "negative index out of range");
  }
  std::string full, without;
  for (std::size_t i = 0; i < context.sentences.size(); ++i) {
    const std::string& text = context.sentences[i].text;
    if (!full.empty()) full += ' ';
    full += text;
    if (i == negative_index) continue;
    if (!without.empty()) without += ' ';
    without += text;
  }
  const std::string_view cond_question = condition_on_question ? question : std::string_view{};
  const AnswerDensities with_neg = density.answer_distributions(full, cond_question, answer);
  const AnswerDensities without_neg = density.answer_distributions(without, cond_question, answer);
  if (with_neg.distributions.size() != without_neg.distributions.size()) {
    throw Error(ErrorCode::dimension_mismatch, "answer position counts differ between contexts");
  }

  double total = 0.0;
  for (std::size_t t = 0; t < with_neg.distributions.size(); ++t) {
    total += kl_divergence(with_neg.distributions[t], without_neg.distributions[t]);
  }
  KlVerdict verdict;
  verdict.score = total / static_cast<double>(with_neg.distributions.size());
  verdict.keep = verdict.score <= kl_threshold;
  return verdict;
}

void build_dataset(std::span<const CorpusDoc> corpus, const CurationConfig& config,
                   const CurationProviders& providers,
                   const std::function<void(const CurationTuple&)>& emit,
                   const std::function<void(const std::string&)>& log,
                   const TokenCounter& counter) {
  const auto note = [&](const std::string& message) {
    if (log) log(message);
  };
  if (!providers.plain_embedder || !providers.generator || !providers.density_factory) {
    throw Error(ErrorCode::invalid_argument, "curation providers not fully constructed");
  }

  for (std::size_t di = 0; di < corpus.size(); ++di) {
    const CorpusDoc& record = corpus[di];
    const Document doc = Document::from_text(record.text, counter);
    if (doc.sentences.size() < 2) {
      note("doc " + record.id + ": fewer than two sentences, skipped");
      continue;
    }
    const std::unique_ptr<DensityProvider> density = providers.density_factory(doc);

    std::size_t positives_used = 0;
    for (std::size_t si = 0;
         si < doc.sentences.size() && positives_used < config.max_positives_per_document; ++si) {
      if (!is_consistent_sentence(doc.sentences[si], config.consistency_threshold)) continue;
      ++positives_used;

      std::vector<QaPair> pairs;
      try {
        pairs = generate_qa(*providers.generator, doc, doc.sentences[si]);
      } catch (const std::exception& e) {
        note("doc " + record.id + " sentence " + std::to_string(si) + ": " + e.what());
        continue;
      }

      for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        const QaPair& pair = pairs[pi];
        try {
          if (!verify_qa(*providers.generator, doc.sentences[si], pair)) continue;

          const NegativeMining mining = mine_negative_candidates(
              doc, si, pair.question, *providers.plain_embedder, config.coverage_fraction, counter);
          if (mining.coverage_excluded) continue;

          std::vector<std::size_t> survivors;
          std::vector<double> survivor_cos, survivor_kl;
          for (std::size_t c = 0; c < mining.candidates.size(); ++c) {
            const KlVerdict verdict =
                kl_filter(*density, doc, mining.candidates[c], pair.question, pair.answer,
                          config.kl_threshold, config.condition_on_question);
            if (!verdict.keep) continue;
            survivors.push_back(mining.candidates[c]);
            survivor_cos.push_back(mining.candidate_cos[c]);
            survivor_kl.push_back(verdict.score);
          }
          if (survivors.size() < config.negatives_per_tuple) continue;

          Rng rng(Rng::mix(config.seed, Rng::mix(di, Rng::mix(si, pi))));
          std::vector<std::size_t> picks =
              rng.sample_indices(survivors.size(), config.negatives_per_tuple);
          std::sort(picks.begin(), picks.end());

          CurationTuple tuple;
          tuple.doc_id = record.id;
          tuple.context = doc.text;
          tuple.question = pair.question;
          tuple.answer = pair.answer;
          tuple.positive_index = si;
          tuple.scores.eta = mining.eta;
          for (std::size_t pick : picks) {
            tuple.negative_indices.push_back(survivors[pick]);
            tuple.scores.neg_cos.push_back(survivor_cos[pick]);
            tuple.scores.neg_kl.push_back(survivor_kl[pick]);
          }
          emit(tuple);
        } catch (const std::exception& e) {
          note("doc " + record.id + " sentence " + std::to_string(si) + " pair " +
               std::to_string(pi) + ": " + e.what());
        }
      }
    }
  }
}

std::vector<CurationTuple> build_dataset(std::span<const CorpusDoc> corpus,
                                         const CurationConfig& config,
                                         const CurationProviders& providers,
                                         const TokenCounter& counter) {
  std::vector<CurationTuple> tuples;
  build_dataset(
      corpus, config, providers, [&](const CurationTuple& t) { tuples.push_back(t); }, {},
      counter);
  return tuples;
}

}  // namespace cpc

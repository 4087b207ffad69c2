#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpc/curation.hpp"
#include "cpc/trainer.hpp"

namespace cpc {

// Corpus JSONL: one { "id": string, "text": string } per line.
std::vector<CorpusDoc> read_corpus_jsonl(const std::filesystem::path& path);
std::vector<CorpusDoc> read_corpus_jsonl(std::istream& in, const std::string& origin);

// Dataset JSONL, one tuple per line:
//   { "id", "context", "question", "answer",
//     "positive": {"start_sent": int}, "negatives": [{"start_sent": int}...],
//     "scores": {"eta": number, "neg_cos": [...], "neg_kl": [...]} }
std::string tuple_to_jsonl_line(const CurationTuple& tuple);
CurationTuple tuple_from_jsonl_line(const std::string& line);

void write_dataset_jsonl(const std::filesystem::path& path,
                         const std::vector<CurationTuple>& tuples);
std::vector<CurationTuple> read_dataset_jsonl(const std::filesystem::path& path);

struct DatasetViolation {
  std::size_t line = 0;  // 1-based
  std::string message;
};

// Structural + invariant checks over a dataset file: indices in range and
// distinct, positive not among negatives, neg_cos strictly below eta,
// neg_kl within lambda, score arrays aligned with negatives.
std::vector<DatasetViolation> validate_dataset(const std::vector<CurationTuple>& tuples,
                                               double kl_threshold,
                                               const TokenCounter& counter = default_tokenizer());

// Versioned JSON checkpoint: config, vocabulary, and every parameter tensor.
struct Checkpoint {
  ToyEncoderParams params;
  Vocabulary vocab;
  TrainConfig config;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Training log CSV: step,l_sc,l_mntp,l,retrieval_acc (blank when not evaluated).
void write_train_log_csv(const std::filesystem::path& path,
                         const std::vector<TrainLogRow>& rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace cpc

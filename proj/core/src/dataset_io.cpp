#include "cpc/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cpc/error.hpp"

namespace cpc {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

ordered_json parse_json_line(const std::string& line, const std::string& origin,
                             std::size_t line_number) {
  ordered_json parsed = ordered_json::parse(line, nullptr, false);
  if (parsed.is_discarded()) {
    throw Error(ErrorCode::parse,
                origin + " line " + std::to_string(line_number) + ": invalid JSON");
  }
  return parsed;
}

}  // namespace

std::vector<CorpusDoc> read_corpus_jsonl(std::istream& in, const std::string& origin) {
  std::vector<CorpusDoc> docs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const ordered_json parsed = parse_json_line(line, origin, line_number);
    if (!parsed.contains("id") || !parsed.contains("text")) {
      throw Error(ErrorCode::parse, origin + " line " + std::to_string(line_number) +
                                        ": corpus record needs id and text");
    }
    docs.push_back({parsed["id"].get<std::string>(), parsed["text"].get<std::string>()});
  }
  return docs;
}

std::vector<CorpusDoc> read_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open corpus file " + path.string());
  return read_corpus_jsonl(in, path.string());
}

std::string tuple_to_jsonl_line(const CurationTuple& tuple) {
  ordered_json j;
  j["id"] = tuple.doc_id;
  j["context"] = tuple.context;
  j["question"] = tuple.question;
  j["answer"] = tuple.answer;
  j["positive"] = {{"start_sent", tuple.positive_index}};
  ordered_json negatives = ordered_json::array();
  for (std::size_t n : tuple.negative_indices) negatives.push_back({{"start_sent", n}});
  j["negatives"] = std::move(negatives);
  j["scores"] = {{"eta", tuple.scores.eta},
                 {"neg_cos", tuple.scores.neg_cos},
                 {"neg_kl", tuple.scores.neg_kl}};
  return j.dump();
}

CurationTuple tuple_from_jsonl_line(const std::string& line) {
  const ordered_json j = ordered_json::parse(line);
  CurationTuple tuple;
  tuple.doc_id = j.at("id").get<std::string>();
  tuple.context = j.at("context").get<std::string>();
  tuple.question = j.at("question").get<std::string>();
  tuple.answer = j.at("answer").get<std::string>();
  tuple.positive_index = j.at("positive").at("start_sent").get<std::size_t>();
  for (const auto& n : j.at("negatives")) {
    tuple.negative_indices.push_back(n.at("start_sent").get<std::size_t>());
  }
  const auto& scores = j.at("scores");
  tuple.scores.eta = scores.at("eta").get<double>();
  tuple.scores.neg_cos = scores.at("neg_cos").get<std::vector<double>>();
  tuple.scores.neg_kl = scores.at("neg_kl").get<std::vector<double>>();
  return tuple;
}

void write_dataset_jsonl(const std::filesystem::path& path,
                         const std::vector<CurationTuple>& tuples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write dataset file " + path.string());
  for (const CurationTuple& t : tuples) out << tuple_to_jsonl_line(t) << '\n';
}

std::vector<CurationTuple> read_dataset_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open dataset file " + path.string());
  std::vector<CurationTuple> tuples;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      tuples.push_back(tuple_from_jsonl_line(line));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::parse,
                  path.string() + " line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return tuples;
}

std::vector<DatasetViolation> validate_dataset(const std::vector<CurationTuple>& tuples,
                                               double kl_threshold, const TokenCounter& counter) {
  std::vector<DatasetViolation> violations;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const CurationTuple& t = tuples[i];
    const std::size_t line = i + 1;
    const auto flag = [&](const std::string& message) {
      violations.push_back({line, message});
    };

    const Document doc = Document::from_text(t.context, counter);
    const std::size_t k = doc.sentences.size();
    if (t.positive_index >= k) flag("positive index out of range");
    if (t.negative_indices.empty()) flag("tuple has no negatives");
    for (std::size_t n : t.negative_indices) {
      if (n >= k) flag("negative index " + std::to_string(n) + " out of range");
      if (n == t.positive_index) flag("negative equals positive index");
    }
    for (std::size_t a = 0; a < t.negative_indices.size(); ++a) {
      for (std::size_t b = a + 1; b < t.negative_indices.size(); ++b) {
        if (t.negative_indices[a] == t.negative_indices[b]) flag("duplicate negative index");
      }
    }
    if (t.scores.neg_cos.size() != t.negative_indices.size() ||
        t.scores.neg_kl.size() != t.negative_indices.size()) {
      flag("score arrays not aligned with negatives");
    }
    for (double c : t.scores.neg_cos) {
      if (!(c < t.scores.eta)) flag("negative cosine not strictly below eta");
    }
    for (double klv : t.scores.neg_kl) {
      if (!(klv <= kl_threshold)) flag("negative KL above lambda");
    }
    if (t.question.empty()) flag("empty question");
    if (t.answer.empty()) flag("empty answer");
  }
  return violations;
}

namespace {

constexpr int kCheckpointVersion = 1;

ordered_json config_to_json(const TrainConfig& c) {
  ordered_json j;
  j["batch_size"] = c.batch_size;
  j["negatives_per_sample"] = c.negatives_per_sample;
  j["mask_fraction"] = c.mask_fraction;
  j["learning_rate"] = c.learning_rate;
  j["temperature"] = c.temperature;
  j["steps"] = c.steps;
  j["seed"] = c.seed;
  j["literal_double_exp"] = c.literal_double_exp;
  j["mntp_same_position"] = c.mntp_same_position;
  j["dim"] = c.dim;
  j["holdout_fraction"] = c.holdout_fraction;
  j["eval_every"] = c.eval_every;
  return j;
}

TrainConfig config_from_json(const ordered_json& j) {
  TrainConfig c;
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.negatives_per_sample = j.at("negatives_per_sample").get<std::size_t>();
  c.mask_fraction = j.at("mask_fraction").get<double>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.temperature = j.at("temperature").get<double>();
  c.steps = j.at("steps").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.literal_double_exp = j.at("literal_double_exp").get<bool>();
  c.mntp_same_position = j.value("mntp_same_position", false);
  c.dim = j.at("dim").get<std::size_t>();
  c.holdout_fraction = j.at("holdout_fraction").get<double>();
  c.eval_every = j.at("eval_every").get<std::size_t>();
  return c;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  ordered_json j;
  j["format"] = "cpc-toy-encoder";
  j["version"] = kCheckpointVersion;
  j["config"] = config_to_json(checkpoint.config);
  j["dim"] = checkpoint.params.dim;
  j["vocab"] = checkpoint.vocab.tokens();
  j["params"] = {{"token_embedding", checkpoint.params.token_embedding},
                 {"w1", checkpoint.params.w1},
                 {"w2", checkpoint.params.w2},
                 {"bias", checkpoint.params.bias},
                 {"output_head", checkpoint.params.output_head}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write checkpoint " + path.string());
  out << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open checkpoint " + path.string());
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::parse, "checkpoint " + path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "cpc-toy-encoder" || j.value("version", 0) != kCheckpointVersion) {
    throw Error(ErrorCode::parse, "unrecognized checkpoint format/version in " + path.string());
  }

  Checkpoint checkpoint;
  checkpoint.config = config_from_json(j.at("config"));
  for (const auto& token : j.at("vocab")) checkpoint.vocab.add(token.get<std::string>());

  ToyEncoderParams& p = checkpoint.params;
  p.dim = j.at("dim").get<std::size_t>();
  p.vocab = checkpoint.vocab.size();
  const auto& params = j.at("params");
  p.token_embedding = params.at("token_embedding").get<std::vector<double>>();
  p.w1 = params.at("w1").get<std::vector<double>>();
  p.w2 = params.at("w2").get<std::vector<double>>();
  p.bias = params.at("bias").get<std::vector<double>>();
  p.output_head = params.at("output_head").get<std::vector<double>>();
  if (p.token_embedding.size() != p.vocab * p.dim || p.w1.size() != p.dim * p.dim ||
      p.w2.size() != p.dim * p.dim || p.bias.size() != p.dim ||
      p.output_head.size() != p.dim * p.vocab) {
    throw Error(ErrorCode::validation, "checkpoint tensor shapes are inconsistent");
  }
  return checkpoint;
}

void write_train_log_csv(const std::filesystem::path& path,
                         const std::vector<TrainLogRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write training log " + path.string());
  out << "step,l_sc,l_mntp,l,retrieval_acc\n";
  for (const TrainLogRow& r : rows) {
    out << r.step << ',' << format_double(r.contrastive) << ',' << format_double(r.mntp) << ','
        << format_double(r.total) << ',';
    if (r.retrieval_accuracy) out << format_double(*r.retrieval_accuracy);
    out << '\n';
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << content;
}

}  // namespace cpc

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cpc/compressor.hpp"
#include "cpc/curation.hpp"
#include "cpc/dataset_io.hpp"
#include "cpc/error.hpp"
#include "cpc/metrics.hpp"
#include "cpc/providers.hpp"
#include "cpc/remote.hpp"
#include "cpc/report.hpp"
#include "cpc/toy_encoder.hpp"
#include "cpc/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct EncoderChoice {
  std::string spec = "test";
  std::size_t test_dim = 64;
  std::string embed_url;
  std::string api_key;

  std::unique_ptr<cpc::Embedder> build() const {
    if (spec == "test") return std::make_unique<cpc::HashEmbedder>(test_dim);
    if (spec == "remote") {
      cpc::RemoteConfig config = cpc::remote_embedder_config_from_env();
      if (!embed_url.empty()) config.url = embed_url;
      if (!api_key.empty()) config.api_key = api_key;
      return std::make_unique<cpc::RemoteEmbedder>(config);
    }
    if (spec.rfind("toy:", 0) == 0) {
      const cpc::Checkpoint checkpoint = cpc::load_checkpoint(spec.substr(4));
      return std::make_unique<cpc::ToyEncoder>(checkpoint.params, checkpoint.vocab);
    }
    throw cpc::Error(cpc::ErrorCode::invalid_argument,
                     "unknown encoder '" + spec + "' (use test, remote, or toy:<checkpoint>)");
  }
};

void add_encoder_flags(CLI::App* cmd, EncoderChoice& choice) {
  cmd->add_option("--encoder", choice.spec, "test | remote | toy:<checkpoint>")
      ->capture_default_str();
  cmd->add_option("--encoder-dim", choice.test_dim, "dimension of the test encoder")
      ->capture_default_str();
  cmd->add_option("--embed-url", choice.embed_url,
                  "remote embedder endpoint (overrides CPC_EMBED_URL)");
  cmd->add_option("--api-key", choice.api_key, "API key (overrides CPC_API_KEY)");
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    cpc::write_text_file(out_path, content);
  }
}

void write_manifest(const std::string& out_path, const std::string& command,
                    ordered_json parameters, ordered_json inputs) {
  if (out_path.empty()) return;
  ordered_json manifest;
  manifest["command"] = command;
  manifest["version"] = kVersion;
  manifest["parameters"] = std::move(parameters);
  manifest["inputs"] = std::move(inputs);
  cpc::write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

// Scripted generator from a JSON file: [{"prompt": ..., "response": ...}, ...]
// or {"responses": [...], "default": "..."}.
std::unique_ptr<cpc::ScriptedGenerator> load_script(const fs::path& path) {
  auto generator = std::make_unique<cpc::ScriptedGenerator>();
  const ordered_json parsed = ordered_json::parse(cpc::read_text_file(path));
  const ordered_json& entries = parsed.is_array() ? parsed : parsed.at("responses");
  for (const auto& entry : entries) {
    generator->add_response(entry.at("prompt").get<std::string>(),
                            entry.at("response").get<std::string>());
  }
  if (parsed.is_object() && parsed.contains("default")) {
    generator->set_default_response(parsed["default"].get<std::string>());
  }
  return generator;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw cpc::Error(cpc::ErrorCode::io, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

int run_compress(const std::string& input, const std::string& question,
                 std::optional<double> ratio, std::optional<std::size_t> budget,
                 const EncoderChoice& encoder_choice, const std::string& out,
                 const std::string& heatmap) {
  cpc::CompressionRequest request;
  request.context = cpc::Document::from_text(cpc::read_text_file(input));
  request.question = question;
  request.ratio = ratio;
  request.budget_tokens = budget;

  const std::unique_ptr<cpc::Embedder> embedder = encoder_choice.build();
  const cpc::CompressionResult result = cpc::compress(request, *embedder);
  write_output(out, cpc::compression_result_to_json(result));

  if (!heatmap.empty()) {
    const auto scored = cpc::score_sentences(request, *embedder);
    cpc::write_text_file(heatmap,
                         cpc::render_heatmap_html(request.context, request.question, scored));
  }
  return 0;
}

int run_curate(const std::string& corpus_path, const std::string& out,
               cpc::CurationConfig config, const EncoderChoice& encoder_choice,
               const std::string& script, const std::string& llm_url,
               const std::string& density_kind, double alpha) {
  const auto corpus = cpc::read_corpus_jsonl(corpus_path);

  const std::unique_ptr<cpc::Embedder> embedder = encoder_choice.build();
  std::unique_ptr<cpc::GenerationProvider> generator;
  if (!script.empty()) {
    generator = load_script(script);
  } else {
    cpc::RemoteConfig remote = cpc::remote_generator_config_from_env();
    if (!llm_url.empty()) remote.url = llm_url;
    if (!encoder_choice.api_key.empty()) remote.api_key = encoder_choice.api_key;
    generator = std::make_unique<cpc::RemoteGenerator>(remote);
  }

  cpc::CurationProviders providers;
  providers.plain_embedder = embedder.get();
  providers.generator = generator.get();
  providers.density_factory =
      [&](const cpc::Document& doc) -> std::unique_ptr<cpc::DensityProvider> {
    if (density_kind == "unigram") {
      return std::make_unique<cpc::UnigramDensityProvider>(doc.text, alpha);
    }
    return std::make_unique<cpc::BigramDensityProvider>(doc.text, alpha);
  };

  std::ofstream dataset(out, std::ios::binary);
  if (!dataset) throw cpc::Error(cpc::ErrorCode::io, "cannot write " + out);
  std::size_t emitted = 0;
  cpc::build_dataset(
      corpus, config, providers,
      [&](const cpc::CurationTuple& tuple) {
        dataset << cpc::tuple_to_jsonl_line(tuple) << '\n';
        ++emitted;
      },
      [](const std::string& message) { std::cerr << "skip: " << message << '\n'; });
  dataset.close();

  write_manifest(out, "curate",
                 ordered_json{{"theta", config.consistency_threshold},
                              {"beta", config.coverage_fraction},
                              {"lambda", config.kl_threshold},
                              {"negatives", config.negatives_per_tuple},
                              {"seed", config.seed},
                              {"max_positives", config.max_positives_per_document},
                              {"condition_on_question", config.condition_on_question},
                              {"density", density_kind},
                              {"alpha", alpha},
                              {"encoder", encoder_choice.spec}},
                 ordered_json{{"corpus", corpus_path}, {"script", script}});
  std::cout << "curated " << emitted << " tuples from " << corpus.size() << " documents\n";
  return 0;
}

int run_train(const std::string& input, const std::string& out, const std::string& log_path,
              const cpc::TrainConfig& config) {
  const auto tuples = cpc::read_dataset_jsonl(input);
  const cpc::TrainOutcome outcome = cpc::train(tuples, config);

  cpc::save_checkpoint(out, {outcome.params, outcome.vocab, config});
  const std::string log_file = log_path.empty() ? out + ".log.csv" : log_path;
  cpc::write_train_log_csv(log_file, outcome.log);

  write_manifest(out, "train-toy",
                 ordered_json{{"batch_size", config.batch_size},
                              {"negatives", config.negatives_per_sample},
                              {"delta", config.mask_fraction},
                              {"learning_rate", config.learning_rate},
                              {"temperature", config.temperature},
                              {"steps", config.steps},
                              {"seed", config.seed},
                              {"literal_double_exp", config.literal_double_exp},
                              {"mntp_same_position", config.mntp_same_position},
                              {"dim", config.dim},
                              {"holdout_fraction", config.holdout_fraction},
                              {"eval_every", config.eval_every}},
                 ordered_json{{"dataset", input}});
  std::cout << "trained " << config.steps << " steps over " << tuples.size()
            << " tuples; final retrieval accuracy " << outcome.final_accuracy << "\n";
  return 0;
}

int run_eval(const std::string& reference_path, const std::string& hypothesis_path,
             const std::string& gold_keywords_path, const std::string& extracted_keywords_path,
             const std::string& out) {
  ordered_json report;
  ordered_json per_pair = ordered_json::array();
  double rouge_sum = 0.0, f1_sum = 0.0, edit_sum = 0.0;
  std::size_t pairs = 0;

  if (!reference_path.empty()) {
    const auto refs = read_lines(reference_path);
    const auto hyps = read_lines(hypothesis_path);
    if (refs.size() != hyps.size()) {
      throw cpc::Error(cpc::ErrorCode::invalid_argument,
                       "reference and hypothesis files differ in line count");
    }
    for (std::size_t i = 0; i < refs.size(); ++i) {
      const auto rouge = cpc::rouge_l(refs[i], hyps[i]);
      const auto f1 = cpc::token_f1(refs[i], hyps[i]);
      const auto edit = cpc::edit_similarity(refs[i], hyps[i]);
      rouge_sum += rouge.score;
      f1_sum += f1.score;
      edit_sum += edit.score;
      ++pairs;
      per_pair.push_back({{"line", i + 1},
                          {"rouge_l", rouge.score},
                          {"token_f1", f1.score},
                          {"edit_similarity", edit.score}});
    }
    report["pairs"] = pairs;
    report["rouge_l"] = {{"mean", pairs ? rouge_sum / pairs : 0.0}};
    report["token_f1"] = {{"mean", pairs ? f1_sum / pairs : 0.0}};
    report["edit_similarity"] = {{"mean", pairs ? edit_sum / pairs : 0.0}};
    report["per_pair"] = std::move(per_pair);
  }

  if (!gold_keywords_path.empty()) {
    const auto parse_keywords = [](const std::string& line) {
      std::set<std::string> keywords;
      std::size_t start = 0;
      while (start <= line.size()) {
        std::size_t end = line.find(',', start);
        if (end == std::string::npos) end = line.size();
        const std::string keyword = line.substr(start, end - start);
        if (keyword.find_first_not_of(" \t") != std::string::npos) keywords.insert(keyword);
        start = end + 1;
        if (end == line.size()) break;
      }
      return keywords;
    };
    const auto gold_lines = read_lines(gold_keywords_path);
    const auto extracted_lines = read_lines(extracted_keywords_path);
    if (gold_lines.size() != extracted_lines.size()) {
      throw cpc::Error(cpc::ErrorCode::invalid_argument,
                       "gold and extracted keyword files differ in line count");
    }
    double recall_sum = 0.0;
    ordered_json per_line = ordered_json::array();
    for (std::size_t i = 0; i < gold_lines.size(); ++i) {
      const auto recall =
          cpc::keyword_recall(parse_keywords(gold_lines[i]), parse_keywords(extracted_lines[i]));
      recall_sum += recall.score;
      per_line.push_back({{"line", i + 1}, {"keyword_recall", recall.score}});
    }
    report["keyword_recall"] = {
        {"mean", gold_lines.empty() ? 0.0 : recall_sum / gold_lines.size()}};
    report["per_keyword_line"] = std::move(per_line);
  }

  if (report.empty()) {
    throw cpc::Error(cpc::ErrorCode::invalid_argument,
                     "eval needs --reference/--hypothesis or keyword files");
  }
  write_output(out, report.dump(2) + "\n");
  write_manifest(out, "eval", ordered_json::object(),
                 ordered_json{{"reference", reference_path},
                              {"hypothesis", hypothesis_path},
                              {"gold_keywords", gold_keywords_path},
                              {"extracted_keywords", extracted_keywords_path}});
  return 0;
}

int run_bench(const std::string& corpus_path, const std::string& question,
              std::optional<double> ratio, std::optional<std::size_t> budget,
              const EncoderChoice& encoder_choice, std::size_t warmup, const std::string& out) {
  const auto corpus = cpc::read_corpus_jsonl(corpus_path);
  if (corpus.empty()) {
    throw cpc::Error(cpc::ErrorCode::invalid_argument, "bench corpus is empty");
  }
  const std::unique_ptr<cpc::Embedder> embedder = encoder_choice.build();

  std::vector<cpc::BenchRow> rows;
  for (const cpc::CorpusDoc& doc : corpus) {
    cpc::CompressionRequest request;
    request.context = cpc::Document::from_text(doc.text);
    request.question = question;
    request.ratio = ratio;
    request.budget_tokens = budget;

    for (std::size_t w = 0; w < warmup; ++w) (void)cpc::compress(request, *embedder);
    const auto begin = std::chrono::steady_clock::now();
    (void)cpc::compress(request, *embedder);
    const auto end = std::chrono::steady_clock::now();
    const double millis = std::chrono::duration<double, std::milli>(end - begin).count();
    rows.push_back(
        {doc.id, request.context.token_count, request.context.sentences.size(), millis});
  }

  write_output(out, cpc::bench_report_to_json(cpc::summarize_bench(std::move(rows))));
  return 0;
}

int run_validate(const std::string& input, double lambda, const std::string& out) {
  const auto tuples = cpc::read_dataset_jsonl(input);
  const auto violations = cpc::validate_dataset(tuples, lambda);

  ordered_json report;
  report["tuples"] = tuples.size();
  report["violations"] = ordered_json::array();
  for (const auto& v : violations) {
    report["violations"].push_back({{"line", v.line}, {"message", v.message}});
    std::cerr << "line " << v.line << ": " << v.message << '\n';
  }
  report["valid"] = violations.empty();
  write_output(out, report.dump(2) + "\n");
  write_manifest(out, "validate-dataset", ordered_json{{"lambda", lambda}},
                 ordered_json{{"dataset", input}});
  return violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sentence-level question-aware prompt compression"};
  app.require_subcommand(1);

  // compress
  auto* compress = app.add_subcommand("compress", "compress a context under a token budget");
  std::string compress_input, compress_question, compress_out, compress_heatmap;
  double compress_ratio = 0.0;
  std::size_t compress_budget = 0;
  EncoderChoice compress_encoder;
  compress->add_option("--input", compress_input, "context text file")->required();
  compress->add_option("--question", compress_question, "question the output must support")
      ->required();
  auto* ratio_opt = compress->add_option("--ratio", compress_ratio, "compression ratio in (0,1]");
  auto* budget_opt =
      compress->add_option("--budget-tokens", compress_budget, "token budget (positive)");
  ratio_opt->excludes(budget_opt);
  budget_opt->excludes(ratio_opt);
  compress->add_option("--out", compress_out, "result JSON path (stdout when omitted)");
  compress->add_option("--heatmap", compress_heatmap, "write a relevance heatmap HTML here");
  add_encoder_flags(compress, compress_encoder);

  // curate
  auto* curate = app.add_subcommand("curate", "build a curation dataset from a corpus");
  std::string curate_corpus, curate_out, curate_script, curate_llm_url;
  std::string curate_density = "bigram";
  double curate_alpha = 1.0;
  cpc::CurationConfig curation_config;
  EncoderChoice curate_encoder;
  curate->add_option("--corpus", curate_corpus, "input corpus JSONL")->required();
  curate->add_option("--out", curate_out, "output dataset JSONL")->required();
  curate->add_option("--theta", curation_config.consistency_threshold,
                     "consistent-sentence word threshold")
      ->capture_default_str();
  curate->add_option("--beta", curation_config.coverage_fraction, "minimum candidate coverage")
      ->capture_default_str();
  curate->add_option("--lambda", curation_config.kl_threshold, "KL filter threshold")
      ->capture_default_str();
  curate->add_option("--negatives", curation_config.negatives_per_tuple, "negatives per tuple")
      ->capture_default_str();
  curate->add_option("--seed", curation_config.seed, "sampling seed")->capture_default_str();
  curate->add_option("--max-positives", curation_config.max_positives_per_document,
                     "positives sampled per document")
      ->capture_default_str();
  curate->add_flag("!--no-question-conditioning", curation_config.condition_on_question,
                   "drop the question from the KL conditioning prefix");
  curate->add_option("--script", curate_script, "scripted generator responses JSON");
  curate->add_option("--llm-url", curate_llm_url,
                     "remote generator endpoint (overrides CPC_LLM_URL)");
  curate->add_option("--density", curate_density, "toy density provider: bigram | unigram")
      ->check(CLI::IsMember({"bigram", "unigram"}))
      ->capture_default_str();
  curate->add_option("--alpha", curate_alpha, "density smoothing")->capture_default_str();
  add_encoder_flags(curate, curate_encoder);

  // train-toy
  auto* train = app.add_subcommand("train-toy", "train the toy context-aware encoder");
  std::string train_input, train_out, train_log;
  cpc::TrainConfig train_config;
  train->add_option("--input", train_input, "curated dataset JSONL")->required();
  train->add_option("--out", train_out, "checkpoint path")->required();
  train->add_option("--log", train_log, "training log CSV (default <out>.log.csv)");
  train->add_option("--steps", train_config.steps, "optimizer steps")->capture_default_str();
  train->add_option("--batch-size", train_config.batch_size, "batch size B")
      ->capture_default_str();
  train->add_option("--negatives", train_config.negatives_per_sample, "negatives per sample M")
      ->capture_default_str();
  train->add_option("--delta", train_config.mask_fraction, "mask fraction")
      ->capture_default_str();
  train->add_option("--lr", train_config.learning_rate, "learning rate")->capture_default_str();
  train->add_option("--temperature", train_config.temperature, "similarity temperature")
      ->capture_default_str();
  train->add_option("--seed", train_config.seed, "training seed")->capture_default_str();
  train->add_flag("--literal-double-exp", train_config.literal_double_exp,
                  "use the doubly exponentiated similarity inside the softmax");
  train->add_flag("--mntp-same-position", train_config.mntp_same_position,
                  "classic masked-LM prediction from the masked position itself");
  train->add_option("--dim", train_config.dim, "encoder dimension")->capture_default_str();
  train->add_option("--holdout", train_config.holdout_fraction, "held-out fraction")
      ->capture_default_str();
  train->add_option("--eval-every", train_config.eval_every, "evaluation cadence")
      ->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "score hypotheses against references");
  std::string eval_reference, eval_hypothesis, eval_gold, eval_extracted, eval_out;
  eval->add_option("--reference", eval_reference, "reference text, one sample per line");
  eval->add_option("--hypothesis", eval_hypothesis, "hypothesis text, one sample per line");
  eval->add_option("--gold-keywords", eval_gold, "gold keywords, comma-separated per line");
  eval->add_option("--extracted-keywords", eval_extracted,
                   "extracted keywords, comma-separated per line");
  eval->add_option("--out", eval_out, "report JSON path (stdout when omitted)");

  // bench
  auto* bench = app.add_subcommand("bench", "per-document compression latency");
  std::string bench_corpus, bench_question, bench_out;
  double bench_ratio = 0.0;
  std::size_t bench_budget = 0;
  std::size_t bench_warmup = 1;
  EncoderChoice bench_encoder;
  bench->add_option("--corpus", bench_corpus, "corpus JSONL")->required();
  bench->add_option("--question", bench_question, "question used for every document")->required();
  auto* bench_ratio_opt = bench->add_option("--ratio", bench_ratio, "compression ratio");
  auto* bench_budget_opt = bench->add_option("--budget-tokens", bench_budget, "token budget");
  bench_ratio_opt->excludes(bench_budget_opt);
  bench_budget_opt->excludes(bench_ratio_opt);
  bench->add_option("--warmup", bench_warmup, "warm-up iterations per document")
      ->capture_default_str();
  bench->add_option("--out", bench_out, "report JSON path (stdout when omitted)");
  add_encoder_flags(bench, bench_encoder);

  // validate-dataset
  auto* validate = app.add_subcommand("validate-dataset", "check dataset invariants");
  std::string validate_input, validate_out;
  double validate_lambda = 4e-3;
  validate->add_option("--input", validate_input, "dataset JSONL")->required();
  validate->add_option("--lambda", validate_lambda, "KL threshold to check against")
      ->capture_default_str();
  validate->add_option("--out", validate_out, "report JSON path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compress->parsed()) {
      return run_compress(
          compress_input, compress_question,
          ratio_opt->count() ? std::optional<double>(compress_ratio) : std::nullopt,
          budget_opt->count() ? std::optional<std::size_t>(compress_budget) : std::nullopt,
          compress_encoder, compress_out, compress_heatmap);
    }
    if (curate->parsed()) {
      return run_curate(curate_corpus, curate_out, curation_config, curate_encoder,
                        curate_script, curate_llm_url, curate_density, curate_alpha);
    }
    if (train->parsed()) {
      return run_train(train_input, train_out, train_log, train_config);
    }
    if (eval->parsed()) {
      return run_eval(eval_reference, eval_hypothesis, eval_gold, eval_extracted, eval_out);
    }
    if (bench->parsed()) {
      return run_bench(
          bench_corpus, bench_question,
          bench_ratio_opt->count() ? std::optional<double>(bench_ratio) : std::nullopt,
          bench_budget_opt->count() ? std::optional<std::size_t>(bench_budget) : std::nullopt,
          bench_encoder, bench_warmup, bench_out);
    }
    if (validate->parsed()) {
      return run_validate(validate_input, validate_lambda, validate_out);
    }
  } catch (const cpc::Error& e) {
    ordered_json err;
    err["error"] = {{"code", cpc::to_string(e.code())}, {"message", e.what()}};
    std::cerr << err.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"] = {{"code", "internal"}, {"message", e.what()}};
    std::cerr << err.dump() << '\n';
    return 1;
  }
  return 0;
}

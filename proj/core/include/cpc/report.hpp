#pragma once

#include <span>
#include <string>
#include <vector>

#include "cpc/compressor.hpp"
#include "cpc/segmentation.hpp"

namespace cpc {

// Stable-key JSON for the compress command output.
std::string compression_result_to_json(const CompressionResult& result);

// Standalone HTML page coloring each sentence by its relevance score
// (min-max normalized intensity); no scripts, no external assets.
std::string render_heatmap_html(const Document& doc, std::string_view question,
                                std::span<const ScoredSentence> scored);

struct BenchRow {
  std::string id;
  std::size_t tokens = 0;
  std::size_t sentences = 0;
  double millis = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double average_ms = 0.0;
  double median_ms = 0.0;
};

BenchReport summarize_bench(std::vector<BenchRow> rows);

// JSON with per-document rows, average/median, and a context-length vs.
// time table over up to `buckets` equal-count groups sorted by length.
std::string bench_report_to_json(const BenchReport& report, std::size_t buckets = 8);

}  // namespace cpc

#include "cpc/report.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace cpc {

using ordered_json = nlohmann::ordered_json;

std::string compression_result_to_json(const CompressionResult& result) {
  ordered_json j;
  j["kept_indices"] = result.kept_indices;
  j["compressed_text"] = result.compressed_text;
  j["original_tokens"] = result.original_tokens;
  j["compressed_tokens"] = result.compressed_tokens;
  j["realized_ratio"] = result.realized_ratio;
  j["truncated"] = result.truncated;
  return j.dump(2) + "\n";
}

namespace {

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double value, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, value);
  return buf;
}

}  // namespace

std::string render_heatmap_html(const Document& doc, std::string_view question,
                                std::span<const ScoredSentence> scored) {
  double lo = 0.0, hi = 0.0;
  if (!scored.empty()) {
    lo = hi = scored.front().score;
    for (const auto& s : scored) {
      lo = std::min(lo, s.score);
      hi = std::max(hi, s.score);
    }
  }
  const double span = hi - lo;

  std::string html;
  html += "<!doctype html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>sentence relevance</title>\n";
  html += "<style>body{font-family:serif;max-width:50em;margin:2em auto;line-height:1.6}"
          ".s{padding:0 2px;border-radius:2px}.legend{color:#555;font-size:0.9em}</style>\n";
  html += "</head>\n<body>\n";
  html += "<h2>Question</h2>\n<p>" + html_escape(question) + "</p>\n";
  html += "<h2>Context</h2>\n<p>\n";
  for (const auto& s : scored) {
    const double intensity = span > 0.0 ? (s.score - lo) / span : 1.0;
    html += "<span class=\"s\" style=\"background: rgba(255,140,0," +
            fixed(0.08 + 0.72 * intensity, 3) + ")\" title=\"score=" + fixed(s.score, 4) +
            "\">" + html_escape(doc.sentences[s.index].text) + "</span> ";
  }
  html += "\n</p>\n";
  html += "<p class=\"legend\">score range: " + fixed(lo, 4) + " to " + fixed(hi, 4) + "</p>\n";
  html += "</body>\n</html>\n";
  return html;
}

BenchReport summarize_bench(std::vector<BenchRow> rows) {
  BenchReport report;
  report.rows = std::move(rows);
  if (report.rows.empty()) return report;

  double total = 0.0;
  std::vector<double> times;
  times.reserve(report.rows.size());
  for (const auto& r : report.rows) {
    total += r.millis;
    times.push_back(r.millis);
  }
  report.average_ms = total / static_cast<double>(times.size());
  std::sort(times.begin(), times.end());
  const std::size_t n = times.size();
  report.median_ms = n % 2 == 1 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
  return report;
}

std::string bench_report_to_json(const BenchReport& report, std::size_t buckets) {
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"id", r.id},
                    {"tokens", r.tokens},
                    {"sentences", r.sentences},
                    {"millis", r.millis}});
  }
  j["per_document"] = std::move(rows);
  j["average_ms"] = report.average_ms;
  j["median_ms"] = report.median_ms;

  // Equal-count groups by token length.
  ordered_json table = ordered_json::array();
  if (!report.rows.empty() && buckets > 0) {
    std::vector<const BenchRow*> sorted;
    for (const auto& r : report.rows) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const BenchRow* a, const BenchRow* b) { return a->tokens < b->tokens; });
    const std::size_t groups = std::min(buckets, sorted.size());
    for (std::size_t g = 0; g < groups; ++g) {
      const std::size_t begin = g * sorted.size() / groups;
      const std::size_t end = (g + 1) * sorted.size() / groups;
      if (begin >= end) continue;
      double mean_ms = 0.0, mean_tokens = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        mean_ms += sorted[i]->millis;
        mean_tokens += static_cast<double>(sorted[i]->tokens);
      }
      const double count = static_cast<double>(end - begin);
      table.push_back({{"max_tokens", sorted[end - 1]->tokens},
                       {"mean_tokens", mean_tokens / count},
                       {"mean_ms", mean_ms / count},
                       {"count", end - begin}});
    }
  }
  j["length_time_table"] = std::move(table);
  return j.dump(2) + "\n";
}

}  // namespace cpc

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cpc {

struct MetricReport {
  std::string metric;
  double score = 0.0;  // always in [0, 1]
  std::optional<double> precision;
  std::optional<double> recall;
};

// Shared normalization: lowercase (ASCII), strip punctuation codepoints,
// collapse whitespace. token_f1 additionally drops the articles a/an/the.
std::vector<std::string> normalize_tokens(std::string_view text, bool drop_articles = false);

// LCS-based F-measure over normalized tokens; 0 when either side is empty.
MetricReport rouge_l(std::string_view reference, std::string_view hypothesis);

// Bag-of-tokens F1 after normalization with article stripping.
MetricReport token_f1(std::string_view reference, std::string_view hypothesis);

// 1 - levenshtein / max(len), over raw codepoints; 1 when both empty.
MetricReport edit_similarity(std::string_view reference, std::string_view hypothesis);

// |gold ∩ extracted| / |gold| after per-keyword normalization. Throws
// empty_gold when the gold set is empty.
MetricReport keyword_recall(const std::set<std::string>& gold_keywords,
                            const std::set<std::string>& extracted);

}  // namespace cpc

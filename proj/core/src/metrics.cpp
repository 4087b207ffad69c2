#include "cpc/metrics.hpp"

#include <algorithm>
#include <map>

#include "cpc/error.hpp"
#include "cpc/tokenizer.hpp"

namespace cpc {

namespace {

void append_codepoint(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xc0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xe0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  } else {
    out += static_cast<char>(0xf0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
    out += static_cast<char>(0x80 | (cp & 0x3f));
  }
}

double f_measure(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

std::vector<char32_t> codepoints(std::string_view text) {
  std::vector<char32_t> cps;
  std::size_t i = 0;
  while (i < text.size()) cps.push_back(decode_utf8(text, i));
  return cps;
}

}  // namespace

std::vector<std::string> normalize_tokens(std::string_view text, bool drop_articles) {
  std::string cleaned;
  cleaned.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = decode_utf8(text, i);
    if (is_punct_codepoint(cp)) continue;
    if (is_unicode_space(cp)) {
      if (!cleaned.empty() && cleaned.back() != ' ') cleaned += ' ';
      continue;
    }
    if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
    append_codepoint(cleaned, cp);
  }

  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < cleaned.size()) {
    std::size_t end = cleaned.find(' ', start);
    if (end == std::string::npos) end = cleaned.size();
    if (end > start) {
      std::string word = cleaned.substr(start, end - start);
      if (!drop_articles || (word != "a" && word != "an" && word != "the")) {
        tokens.push_back(std::move(word));
      }
    }
    start = end + 1;
  }
  return tokens;
}

MetricReport rouge_l(std::string_view reference, std::string_view hypothesis) {
  const std::vector<std::string> ref = normalize_tokens(reference);
  const std::vector<std::string> hyp = normalize_tokens(hypothesis);
  MetricReport report{"rouge_l", 0.0, 0.0, 0.0};
  if (ref.empty() || hyp.empty()) return report;

  // Two-row LCS table.
  std::vector<std::size_t> prev(hyp.size() + 1, 0), cur(hyp.size() + 1, 0);
  for (std::size_t r = 1; r <= ref.size(); ++r) {
    for (std::size_t h = 1; h <= hyp.size(); ++h) {
      cur[h] = ref[r - 1] == hyp[h - 1] ? prev[h - 1] + 1 : std::max(prev[h], cur[h - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[hyp.size()]);
  const double precision = lcs / static_cast<double>(hyp.size());
  const double recall = lcs / static_cast<double>(ref.size());
  report.precision = precision;
  report.recall = recall;
  report.score = f_measure(precision, recall);
  return report;
}

MetricReport token_f1(std::string_view reference, std::string_view hypothesis) {
  const std::vector<std::string> ref = normalize_tokens(reference, /*drop_articles=*/true);
  const std::vector<std::string> hyp = normalize_tokens(hypothesis, /*drop_articles=*/true);
  MetricReport report{"token_f1", 0.0, 0.0, 0.0};
  if (ref.empty() || hyp.empty()) return report;

  std::map<std::string, std::size_t> ref_counts;
  for (const auto& t : ref) ++ref_counts[t];
  double common = 0.0;
  for (const auto& t : hyp) {
    const auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      common += 1.0;
    }
  }
  const double precision = common / static_cast<double>(hyp.size());
  const double recall = common / static_cast<double>(ref.size());
  report.precision = precision;
  report.recall = recall;
  report.score = f_measure(precision, recall);
  return report;
}

MetricReport edit_similarity(std::string_view reference, std::string_view hypothesis) {
  const std::vector<char32_t> a = codepoints(reference);
  const std::vector<char32_t> b = codepoints(hypothesis);
  MetricReport report{"edit_similarity", 1.0, std::nullopt, std::nullopt};
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return report;

  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitution = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitution});
    }
    std::swap(prev, cur);
  }
  const double distance = static_cast<double>(prev[b.size()]);
  report.score = 1.0 - distance / static_cast<double>(longest);
  return report;
}

MetricReport keyword_recall(const std::set<std::string>& gold_keywords,
                            const std::set<std::string>& extracted) {
  if (gold_keywords.empty()) {
    throw Error(ErrorCode::empty_gold, "keyword_recall needs a nonempty gold set");
  }
  const auto normalize = [](const std::string& keyword) {
    std::string joined;
    for (const auto& t : normalize_tokens(keyword)) {
      if (!joined.empty()) joined += ' ';
      joined += t;
    }
    return joined;
  };
  std::set<std::string> gold, got;
  for (const auto& k : gold_keywords) gold.insert(normalize(k));
  for (const auto& k : extracted) got.insert(normalize(k));
  gold.erase("");
  if (gold.empty()) {
    throw Error(ErrorCode::empty_gold, "gold keywords normalize to nothing");
  }
  double hit = 0.0;
  for (const auto& k : gold) {
    if (got.count(k)) hit += 1.0;
  }
  MetricReport report{"keyword_recall", hit / static_cast<double>(gold.size()),
                      std::nullopt, std::nullopt};
  report.recall = report.score;
  return report;
}

}  // namespace cpc

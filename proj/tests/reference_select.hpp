#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "cpc/compressor.hpp"

namespace cpc::test {

// Independent reference selector: sort (-score, index) pairs, one greedy
// pass, re-sort kept ascending. Deliberately written apart from the
// implementation it checks.
inline std::vector<std::size_t> reference_select(const std::vector<cpc::ScoredSentence>& scored,
                                                 std::size_t budget) {
  std::vector<std::pair<double, std::size_t>> ranked;
  for (const auto& s : scored) ranked.emplace_back(-s.score, s.index);
  std::stable_sort(ranked.begin(), ranked.end());

  std::vector<std::size_t> kept;
  std::size_t used = 0;
  for (const auto& [neg_score, index] : ranked) {
    const auto it =
        std::find_if(scored.begin(), scored.end(),
                     [index = index](const cpc::ScoredSentence& s) { return s.index == index; });
    if (used + it->token_count <= budget) {
      kept.push_back(index);
      used += it->token_count;
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace cpc::test

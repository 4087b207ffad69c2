#pragma once

#include <string>
#include <vector>

#include "cpc/curation.hpp"
#include "cpc/rng.hpp"

namespace cpc::test {

// Templated curation tuples: five-sentence contexts with exactly one sentence
// answering a what-does-X-eat question; the other sentences mention other
// animals or nothing relevant. Small shared token inventory so a toy
// encoder can generalize to held-out combinations.
inline std::vector<cpc::CurationTuple> make_synthetic_tuples(std::size_t count,
                                                          std::uint64_t seed) {
  const std::vector<std::string> animals = {"cat",  "dog",  "bird", "fish",
                                            "horse", "cow",  "bee",  "fox"};
  const std::vector<std::string> foods = {"apples", "bread", "corn", "seeds",
                                          "grass",  "honey", "milk", "water"};
  cpc::Rng rng(seed);
  std::vector<cpc::CurationTuple> tuples;
  for (std::size_t i = 0; i < count; ++i) {
    const std::string& animal = animals[i % animals.size()];
    const std::string& food = foods[(i / animals.size() + i) % foods.size()];
    const std::string& other_a = animals[(i + 3) % animals.size()];
    const std::string& other_b = animals[(i + 5) % animals.size()];

    std::vector<std::string> sentences = {
        "The " + other_a + " sleeps near the door.",
        "The " + animal + " eats " + food + ".",
        "Rain falls on the roof.",
        "The " + other_b + " plays by the river.",
        "Numbers appear on the wall.",
    };
    std::size_t positive = 1;
    if (i % 2 == 1) {  // vary the positive position
      std::swap(sentences[0], sentences[1]);
      positive = 0;
    }

    cpc::CurationTuple t;
    t.doc_id = "synthetic-" + std::to_string(i);
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      if (s) t.context += ' ';
      t.context += sentences[s];
    }
    t.question = "What does the " + animal + " eat?";
    t.answer = food;
    t.positive_index = positive;
    std::vector<std::size_t> pool;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      if (s != positive) pool.push_back(s);
    }
    const auto picks = rng.sample_indices(pool.size(), 2);
    t.negative_indices = {pool[picks[0]], pool[picks[1]]};
    std::sort(t.negative_indices.begin(), t.negative_indices.end());
    t.scores.eta = 0.9;
    t.scores.neg_cos = {0.1, 0.2};
    t.scores.neg_kl = {0.0, 0.0};
    tuples.push_back(std::move(t));
  }
  return tuples;
}

}  // namespace cpc::test

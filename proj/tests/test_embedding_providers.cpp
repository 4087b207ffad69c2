#include <doctest.h>

#include <cmath>

#include "cpc/embedding.hpp"
#include "cpc/error.hpp"
#include "cpc/providers.hpp"
#include "cpc/rng.hpp"
#include "helpers.hpp"

using namespace cpc;

namespace {

Embedding unit2(double x, double y) { return Embedding::normalized({x, y}); }

}  // namespace

TEST_CASE("pool_span worked examples") {
  const TokenEmbeddings emb = TokenEmbeddings::from_rows({{1.0, 0.0}, {0.0, 1.0}});

  const Embedding pooled = pool_span(emb, 0, 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(pooled.values[0] == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(pooled.values[1] == doctest::Approx(inv_sqrt2).epsilon(1e-12));

  const Embedding single = pool_span(emb, 1, 1);
  CHECK(single.values[0] == doctest::Approx(0.0));
  CHECK(single.values[1] == doctest::Approx(1.0));

  // equal vectors over the span keep the direction
  const TokenEmbeddings same =
      TokenEmbeddings::from_rows({{0.3, 0.4}, {0.3, 0.4}, {0.3, 0.4}});
  const Embedding dir = pool_span(same, 0, 2);
  CHECK(cosine(dir, unit2(0.3, 0.4)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pool_span rejects empty mean and bad spans") {
  const TokenEmbeddings emb = TokenEmbeddings::from_rows({{1.0, 0.0}, {-1.0, 0.0}});
  CHECK_THROWS_AS(pool_span(emb, 0, 1), Error);  // cancels to zero
  CHECK_THROWS_AS(pool_span(emb, 1, 0), Error);
  CHECK_THROWS_AS(pool_span(emb, 0, 2), Error);
}

TEST_CASE("cosine landmarks and properties") {
  const Embedding e0 = unit2(1.0, 0.0);
  const Embedding e1 = unit2(0.0, 1.0);
  const Embedding neg = unit2(-1.0, 0.0);
  CHECK(cosine(e0, e0) == doctest::Approx(1.0));
  CHECK(cosine(e0, e1) == doctest::Approx(0.0));
  CHECK(cosine(e0, neg) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(cosine(e0, Embedding::normalized({1.0, 0.0, 0.0})), Error);

  Rng rng(11);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<double> a(8), b(8);
    for (double& v : a) v = rng.uniform(-1.0, 1.0);
    for (double& v : b) v = rng.uniform(-1.0, 1.0);
    const Embedding ea = Embedding::normalized(std::move(a));
    const Embedding eb = Embedding::normalized(std::move(b));
    const double ab = cosine(ea, eb);
    CHECK(ab >= -1.0);
    CHECK(ab <= 1.0);
    CHECK(ab == doctest::Approx(cosine(eb, ea)).epsilon(1e-12));
  }
}

TEST_CASE("hash embedder is pure and shape-correct") {
  const HashEmbedder embedder(32);
  const std::vector<std::string> one = {"solo"};
  CHECK(embedder.embed_document(one).size() == 1);

  const std::vector<std::string> tokens = {"alpha", "beta", "alpha", "gamma"};
  const TokenEmbeddings a = embedder.embed_document(tokens);
  const TokenEmbeddings b = embedder.embed_document(tokens);
  REQUIRE(a.size() == 4);
  CHECK(a.data == b.data);  // bit-identical
  // identical tokens share identical vectors
  const auto row = [&](const TokenEmbeddings& e, std::size_t t) {
    return std::vector<double>(e.vector(t).begin(), e.vector(t).end());
  };
  CHECK(row(a, 0) == row(a, 2));
  CHECK(row(a, 0) != row(a, 1));

  CHECK_THROWS_AS(embedder.embed_document({}), Error);

  const HashEmbedder tiny(8, 0, /*max_tokens=*/2);
  try {
    (void)tiny.embed_document(tokens);
    FAIL("expected context overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::context_overflow);
  }
}

TEST_CASE("every embedding leaving the module has unit norm") {
  const HashEmbedder embedder(16);
  Rng rng(3);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<std::string> tokens;
    const std::size_t n = 1 + rng.uniform_int(20);
    for (std::size_t i = 0; i < n; ++i) {
      tokens.push_back(test::word_pool()[rng.uniform_int(test::word_pool().size())]);
    }
    const TokenEmbeddings emb = embedder.embed_document(tokens);
    const Embedding pooled = pool_span(emb, 0, emb.size() - 1);
    double sq = 0.0;
    for (double v : pooled.values) sq += v * v;
    CHECK(std::abs(std::sqrt(sq) - 1.0) < 1e-6);

    // full-document pooling equals the normalized mean of all vectors
    std::vector<double> mean(emb.dim, 0.0);
    for (std::size_t t = 0; t < emb.size(); ++t) {
      for (std::size_t d = 0; d < emb.dim; ++d) mean[d] += emb.vector(t)[d];
    }
    const Embedding manual = Embedding::normalized(std::move(mean));
    CHECK(cosine(manual, pooled) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("embed_question embeds the text alone and pools its tokens") {
  const HashEmbedder embedder(16);
  CHECK_THROWS_AS(embed_question(embedder, ""), Error);
  try {
    (void)embed_question(embedder, " ... ");
    FAIL("expected empty question");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_question);
  }

  const Embedding single = embed_question(embedder, "solo");
  const TokenEmbeddings raw = embedder.embed_document(std::vector<std::string>{"solo"});
  const Embedding expected = Embedding::normalized(
      std::vector<double>(raw.vector(0).begin(), raw.vector(0).end()));
  CHECK(cosine(single, expected) == doctest::Approx(1.0).epsilon(1e-12));

  const std::string question = "where is the harbor";
  const Embedding q1 = embed_question(embedder, question);
  const Embedding q2 = embed_question(embedder, question);
  CHECK(q1.values == q2.values);

  const TokenEmbeddings tokens =
      embedder.embed_document(default_tokenizer().token_texts(question));
  const Embedding pooled = pool_span(tokens, 0, tokens.size() - 1);
  CHECK(cosine(q1, pooled) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scripted generator keyed by prompt hash") {
  ScriptedGenerator gen;
  gen.add_response("tell me", "canned");
  CHECK(gen.generate("tell me") == "canned");
  try {
    (void)gen.generate("unknown");
    FAIL("expected transport error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::transport);
  }
  gen.set_default_response("fallback");
  CHECK(gen.generate("unknown") == "fallback");
}

TEST_CASE("unigram density provider is position independent") {
  const UnigramDensityProvider provider("red blue red green");
  const AnswerDensities out = provider.answer_distributions("red blue red green", "", "blue red blue");
  REQUIRE(out.distributions.size() == 3);
  for (const auto& dist : out.distributions) {
    double sum = 0.0;
    for (double p : dist) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dist == out.distributions[0]);
  }
  // vocab: <unk>, red, blue, green; counts 2,1,1 over 4 tokens, alpha=1
  CHECK(out.distributions[0][provider.vocab_size() - 3] ==
        doctest::Approx((2.0 + 1.0) / (4.0 + 4.0)).epsilon(1e-12));
}

TEST_CASE("bigram density provider matches hand-computed counts") {
  // conditioning sequence: one two three four five one two
  const std::string corpus = "one two three four five one two";
  const BigramDensityProvider provider(corpus);
  REQUIRE(provider.vocab_size() == 6);  // <unk> one two three four five

  const AnswerDensities out = provider.answer_distributions(corpus, "", "two");
  REQUIRE(out.distributions.size() == 1);
  const auto& dist = out.distributions[0];

  // prev = final "two": successors counted once (two -> three), Laplace 1.
  const std::size_t three = provider.token_id("three");
  for (std::size_t w = 0; w < dist.size(); ++w) {
    const double expected = (w == three ? 2.0 : 1.0) / (1.0 + 6.0);
    CHECK(dist[w] == doctest::Approx(expected).epsilon(1e-12));
  }

  // multi-token answer: position 1 conditions on answer token 0
  const AnswerDensities pair = provider.answer_distributions(corpus, "", "one two");
  REQUIRE(pair.distributions.size() == 2);
  const std::size_t two = provider.token_id("two");
  // prev = "one", which appears twice with successor "two" both times
  CHECK(pair.distributions[1][two] == doctest::Approx((2.0 + 1.0) / (2.0 + 6.0)).epsilon(1e-12));

  try {
    (void)provider.answer_distributions(corpus, "", "...");
    FAIL("expected empty answer");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_answer);
  }
}

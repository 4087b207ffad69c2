#include <doctest.h>

#include "cpc/segmentation.hpp"
#include "cpc/tokenizer.hpp"
#include "helpers.hpp"

using namespace cpc;

TEST_CASE("count_tokens basics") {
  CHECK(count_tokens("") == 0);
  CHECK(count_tokens("hello world") == 2);
  CHECK(count_tokens("don't stop") == 3);

  const auto tokens = default_tokenizer().token_texts("don't stop");
  REQUIRE(tokens.size() == 3);
  CHECK(tokens[0] == "don");
  CHECK(tokens[1] == "'t");
  CHECK(tokens[2] == "stop");

  CHECK(count_tokens("It rained.") == 3);
  CHECK(count_tokens("...") == 0);   // punctuation-only chunk
  CHECK(count_tokens("a...b") == 5); // every punctuation codepoint splits
  CHECK(count_tokens("  spaced \t out \n") == 2);
}

TEST_CASE("token offsets index into the input") {
  const std::string text = "Dr. Smith isn't here.";
  for (const Token& t : default_tokenizer().tokenize(text)) {
    CHECK(text.substr(t.begin, t.end - t.begin) == t.text);
  }
}

TEST_CASE("count is monotone over prefixes and additive over space joins") {
  Rng rng(7);
  const std::string punct = ".!?',-\"";
  for (int iter = 0; iter < 200; ++iter) {
    std::string text;
    const std::size_t len = rng.uniform_int(40);
    for (std::size_t i = 0; i < len; ++i) {
      const auto pick = rng.uniform_int(10);
      if (pick < 5) {
        text += static_cast<char>('a' + rng.uniform_int(26));
      } else if (pick < 7) {
        text += ' ';
      } else {
        text += punct[rng.uniform_int(punct.size())];
      }
    }
    const std::size_t full = count_tokens(text);
    for (std::size_t cut = 0; cut <= text.size(); ++cut) {
      CHECK(count_tokens(text.substr(0, cut)) <= full);
    }

    const std::string other = "second chunk";
    CHECK(count_tokens(text + " " + other) == full + count_tokens(other));
  }
}

TEST_CASE("split_sentences worked examples") {
  CHECK(split_sentences("").empty());

  const auto three = split_sentences("It rained. Did it? Yes!");
  REQUIRE(three.size() == 3);
  CHECK(three[0].text == "It rained.");
  CHECK(three[1].text == "Did it?");
  CHECK(three[2].text == "Yes!");

  const auto one = split_sentences("Dr. Smith left early.");
  REQUIRE(one.size() == 1);
  CHECK(one[0].text == "Dr. Smith left early.");
}

TEST_CASE("splitter abbreviation, quote and newline rules") {
  CHECK(split_sentences("See Fig. 3 for details.").size() == 1);
  CHECK(split_sentences("Take e.g. Smith and others.").size() == 1);
  CHECK(split_sentences("It cost five dollars. No refunds.").size() == 2);

  const auto quoted = split_sentences("She said \"Stop.\" Then she left.");
  REQUIRE(quoted.size() == 2);
  CHECK(quoted[0].text == "She said \"Stop.\"");

  const auto lines = split_sentences("First heading\nsecond line item\nThird one.");
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].text == "second line item");

  // lowercase after the period: no boundary
  CHECK(split_sentences("It was v. strange but fine.").size() == 1);
}

TEST_CASE("punctuation-only sentences are dropped but stay in the text") {
  const Document doc = Document::from_text("Heading one\n---\nThe cat sat.");
  REQUIRE(doc.sentences.size() == 2);
  CHECK(doc.sentences[0].text == "Heading one");
  CHECK(doc.sentences[1].text == "The cat sat.");
  CHECK(doc.token_count == 2 + 4);
}

TEST_CASE("document invariants on random inputs") {
  Rng rng(99);
  for (int iter = 0; iter < 50; ++iter) {
    const Document doc = test::random_document(rng, 1 + rng.uniform_int(20));

    std::size_t token_sum = 0;
    std::size_t prev_char_end = 0;
    std::size_t prev_token_end = 0;
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
      const Sentence& s = doc.sentences[i];
      CHECK(s.char_end > s.char_begin);
      CHECK(s.token_end >= s.token_begin);
      CHECK(s.token_count == s.token_end - s.token_begin + 1);
      CHECK(doc.text.substr(s.char_begin, s.char_end - s.char_begin) == s.text);
      if (i > 0) {
        CHECK(s.char_begin >= prev_char_end);
        CHECK(s.token_begin == prev_token_end + 1);
      }
      prev_char_end = s.char_end;
      prev_token_end = s.token_end;
      token_sum += s.token_count;
    }
    CHECK(doc.token_count == token_sum);
    CHECK(doc.tokens.size() == token_sum);

    // Gaps between sentences carry no token-bearing content.
    std::size_t cursor = 0;
    for (const Sentence& s : doc.sentences) {
      CHECK(count_tokens(doc.text.substr(cursor, s.char_begin - cursor)) == 0);
      cursor = s.char_end;
    }
    CHECK(count_tokens(doc.text.substr(cursor)) == 0);
  }
}

TEST_CASE("splitting a single sentence is idempotent") {
  Rng rng(123);
  for (int iter = 0; iter < 30; ++iter) {
    const Document doc = test::random_document(rng, 1 + rng.uniform_int(8));
    for (const Sentence& s : doc.sentences) {
      const auto again = split_sentences(s.text);
      REQUIRE(again.size() == 1);
      CHECK(again[0].text == s.text);
      CHECK(again[0].token_count == s.token_count);
    }
  }
}

TEST_CASE("splitting is deterministic") {
  const std::string text = "It rained. Did it? Yes! See Fig. 2.\nAnd a heading";
  const Document a = Document::from_text(text);
  const Document b = Document::from_text(text);
  REQUIRE(a.sentences.size() == b.sentences.size());
  for (std::size_t i = 0; i < a.sentences.size(); ++i) {
    CHECK(a.sentences[i].text == b.sentences[i].text);
    CHECK(a.sentences[i].char_begin == b.sentences[i].char_begin);
    CHECK(a.sentences[i].token_begin == b.sentences[i].token_begin);
  }
}

TEST_CASE("unicode whitespace and punctuation") {
  CHECK(count_tokens("caf\xc3\xa9 bar") == 2);                 // é is a word char
  CHECK(count_tokens("one\xc2\xa0two") == 2);                  // nbsp splits
  CHECK(count_tokens("\xe2\x80\x9cquoted\xe2\x80\x9d") == 3);  // curly quotes split off
  const auto tokens = default_tokenizer().token_texts("don\xe2\x80\x99t");
  REQUIRE(tokens.size() == 2);  // curly apostrophe contraction
  CHECK(tokens[0] == "don");
}

namespace {

// whitespace-only counter: a stand-in subword counter for the pluggable
// interface (separators still contribute nothing)
class WordCounter final : public TokenCounter {
 public:
  std::vector<Token> tokenize(std::string_view text) const override {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j > i) out.push_back({std::string(text.substr(i, j - i)), i, j});
      i = j;
    }
    return out;
  }
};

}  // namespace

TEST_CASE("documents honor a substituted token counter") {
  const WordCounter counter;
  const Document doc = Document::from_text("It rained. Did it? Yes!", counter);
  REQUIRE(doc.sentences.size() == 3);
  CHECK(doc.sentences[0].token_count == 2);  // "It" "rained." as whole words
  CHECK(doc.sentences[1].token_count == 2);
  CHECK(doc.sentences[2].token_count == 1);
  CHECK(doc.token_count == 5);
}

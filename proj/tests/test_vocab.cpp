#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "ironic/text/normalize.hpp"
#include "ironic/util/text_io.hpp"
#include "ironic/vocab.hpp"

using namespace ironic;

namespace {

CleanSentence sentence(const std::string& tokens) {
  CleanSentence s;
  s.tokens = split_ws(tokens);
  return s;
}

StyledCorpus corpus_of(std::vector<std::string> lines, Style style = Style::non_irony) {
  StyledCorpus c;
  c.style = style;
  for (auto& l : lines) c.sentences.push_back(sentence(l));
  return c;
}

}  // namespace

TEST_CASE("reserved ids are fixed") {
  Vocabulary v;
  CHECK(v.size() == Vocabulary::kReservedCount);
  CHECK(v.token(Vocabulary::kPad) == "⟨pad⟩");
  CHECK(v.token(Vocabulary::kBos) == "⟨bos⟩");
  CHECK(v.token(Vocabulary::kEos) == "⟨eos⟩");
  CHECK(v.token(Vocabulary::kUnk) == "⟨unk⟩");
  CHECK(v.token(Vocabulary::kNumber) == text::kNumberToken);
  CHECK(v.token(Vocabulary::kUser) == text::kUserToken);
}

TEST_CASE("build respects min_count and orders by frequency") {
  auto c = corpus_of({"a a a b b c", "a b c d", "e e e"});
  Vocabulary v = Vocabulary::build({c}, 3);
  // counts: a=4 b=3 e=3 c=2 d=1 -> only a, b, e survive (ties break lexically)
  CHECK(v.size() == Vocabulary::kReservedCount + 3);
  CHECK(v.id("a") == Vocabulary::kReservedCount);
  CHECK(v.id("b") == Vocabulary::kReservedCount + 1);
  CHECK(v.id("e") == Vocabulary::kReservedCount + 2);
  CHECK(v.id("c") == Vocabulary::kUnk);
  CHECK(v.id("d") == Vocabulary::kUnk);
  CHECK(v.count(v.id("a")) == 4);
}

TEST_CASE("build respects the size cap") {
  std::vector<std::string> lines;
  for (int i = 0; i < 50; ++i)
    lines.push_back("w" + std::to_string(i) + " w" + std::to_string(i) + " w" +
                    std::to_string(i));
  Vocabulary v = Vocabulary::build({corpus_of(lines)}, 1, Vocabulary::kReservedCount + 10);
  CHECK(v.size() == Vocabulary::kReservedCount + 10);
  CHECK_THROWS_AS(Vocabulary::build({corpus_of(lines)}, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(Vocabulary::build({StyledCorpus{}}, 1), std::invalid_argument);
}

TEST_CASE("placeholders observed in the corpus keep their reserved ids") {
  auto c = corpus_of({text::kNumberToken + " a a a " + text::kNumberToken,
                      text::kUserToken + " a " + text::kNumberToken});
  Vocabulary v = Vocabulary::build({c}, 1);
  CHECK(v.id(text::kNumberToken) == Vocabulary::kNumber);
  CHECK(v.id(text::kUserToken) == Vocabulary::kUser);
  CHECK(v.count(Vocabulary::kNumber) == 3);
  CHECK(v.count(Vocabulary::kUser) == 1);
  CHECK(v.size() == Vocabulary::kReservedCount + 1);  // just "a"
}

TEST_CASE("encode appends EOS and maps OOV to unk") {
  Vocabulary v = Vocabulary::build({corpus_of({"a a a b b b"})}, 3);
  TokenIdSequence t = v.encode(sentence("a b zzz"), Style::irony);
  CHECK(t.style == Style::irony);
  REQUIRE(t.ids.size() == 4);
  CHECK(t.ids[0] == v.id("a"));
  CHECK(t.ids[1] == v.id("b"));
  CHECK(t.ids[2] == Vocabulary::kUnk);
  CHECK(t.ids[3] == Vocabulary::kEos);
}

TEST_CASE("encode truncates to max_len with EOS last") {
  Vocabulary v = Vocabulary::build({corpus_of({"a a a"})}, 1);
  CleanSentence s;
  for (int i = 0; i < 45; ++i) s.tokens.push_back("a");
  TokenIdSequence t = v.encode(s);
  REQUIRE(t.ids.size() == kMaxLen);
  CHECK(t.ids.back() == Vocabulary::kEos);
  for (int i = 0; i + 1 < kMaxLen; ++i) CHECK(t.ids[i] == v.id("a"));

  // shorter caps apply the same rule
  TokenIdSequence t5 = v.encode(s, Style::non_irony, 5);
  REQUIRE(t5.ids.size() == 5);
  CHECK(t5.ids.back() == Vocabulary::kEos);
}

TEST_CASE("in-vocabulary sentence round-trips") {
  Vocabulary v = Vocabulary::build(
      {corpus_of({"we love fresh coffee every single morning here today really"}),
       corpus_of({"we love fresh coffee every single morning here today really"}),
       corpus_of({"we love fresh coffee every single morning here today really"})},
      3);
  CleanSentence s = sentence("we love fresh coffee every single morning here today really");
  CHECK(join(v.decode(v.encode(s)).tokens) == join(s.tokens));
}

TEST_CASE("decode drops structural ids only") {
  Vocabulary v = Vocabulary::build({corpus_of({"a a a"})}, 1);
  TokenIdSequence t;
  t.ids = {Vocabulary::kBos, v.id("a"), Vocabulary::kPad, Vocabulary::kUnk, Vocabulary::kEos};
  CleanSentence s = v.decode(t);
  REQUIRE(s.tokens.size() == 2);
  CHECK(s.tokens[0] == "a");
  CHECK(s.tokens[1] == "⟨unk⟩");
}

TEST_CASE("encode is length-monotone before truncation") {
  Vocabulary v = Vocabulary::build({corpus_of({"a a a b b b"})}, 1);
  CleanSentence shorter = sentence("a b a");
  CleanSentence longer = sentence("a b a b a");
  CHECK(v.encode(shorter).ids.size() <= v.encode(longer).ids.size());
}

TEST_CASE("save and load round-trip") {
  Vocabulary v = Vocabulary::build({corpus_of({"a a a b b b c c c"})}, 2);
  std::string path = std::string(IRONIC_SOURCE_DIR) + "/build/test_vocab_roundtrip.txt";
  v.save(path);
  Vocabulary w = Vocabulary::load(path);
  CHECK(w.size() == v.size());
  for (int id = 0; id < v.size(); ++id) {
    CHECK(w.token(id) == v.token(id));
    CHECK(w.count(id) == v.count(id));
  }
  std::remove(path.c_str());
}

TEST_CASE("token lookup rejects out-of-range ids") {
  Vocabulary v;
  CHECK_THROWS_AS(v.token(-1), std::out_of_range);
  CHECK_THROWS_AS(v.token(v.size()), std::out_of_range);
}

// Evaluation metrics: corpus BLEU against a second implementation, the
// standardized-sentiment metrics, and the aggregate means.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "ironic/eval/metrics.hpp"
#include "ironic/util/rng.hpp"

using namespace ironic;
using namespace ironic::eval;

namespace {

using Corpus = std::vector<std::vector<std::string>>;

// Cross-check implementation: flat joined-string n-gram keys and a direct
// product of precisions instead of pooled log space.
double oracle_bleu(const Corpus& refs, const Corpus& hyps) {
  REQUIRE(refs.size() == hyps.size());
  double precisions[4];
  long ref_len = 0, hyp_len = 0;
  for (int n = 1; n <= 4; ++n) {
    long match = 0, total = 0;
    for (size_t s = 0; s < refs.size(); ++s) {
      auto grams = [n](const std::vector<std::string>& toks) {
        std::map<std::string, long> m;
        for (int i = 0; i + n <= static_cast<int>(toks.size()); ++i) {
          std::string key;
          for (int j = 0; j < n; ++j) key += toks[static_cast<size_t>(i + j)] + '\x1f';
          ++m[key];
        }
        return m;
      };
      const auto r = grams(refs[s]);
      for (const auto& [key, c] : grams(hyps[s])) {
        total += c;
        const auto it = r.find(key);
        if (it != r.end()) match += std::min(c, it->second);
      }
    }
    if (total == 0 || match == 0) return 0.0;
    precisions[n - 1] = static_cast<double>(match) / static_cast<double>(total);
  }
  for (size_t s = 0; s < refs.size(); ++s) {
    ref_len += static_cast<long>(refs[s].size());
    hyp_len += static_cast<long>(hyps[s].size());
  }
  const double geo =
      std::pow(precisions[0] * precisions[1] * precisions[2] * precisions[3], 0.25);
  const double bp = hyp_len >= ref_len
                        ? 1.0
                        : std::exp(1.0 - static_cast<double>(ref_len) /
                                             static_cast<double>(hyp_len));
  return 100.0 * bp * geo;
}

// Sentences sampled from overlapping vocabulary so n-gram matches of every
// order actually occur.
Corpus random_corpus(Rng& rng, size_t sentences, int vocab, int min_len, int max_len) {
  Corpus out;
  for (size_t s = 0; s < sentences; ++s) {
    const int len = min_len + static_cast<int>(rng.below(
                                  static_cast<uint64_t>(max_len - min_len + 1)));
    std::vector<std::string> sent;
    for (int t = 0; t < len; ++t)
      sent.push_back("w" + std::to_string(rng.below(static_cast<uint64_t>(vocab))));
    out.push_back(std::move(sent));
  }
  return out;
}

// A hypothesis corpus correlated with `refs`: mostly copies with scattered
// substitutions, insertions, and truncations.
Corpus perturb(const Corpus& refs, Rng& rng, int vocab) {
  Corpus hyps;
  for (const auto& ref : refs) {
    std::vector<std::string> hyp = ref;
    const size_t edits = rng.below(1 + hyp.size() / 3);
    for (size_t e = 0; e < edits && !hyp.empty(); ++e) {
      const size_t pos = rng.below(hyp.size());
      switch (rng.below(3)) {
        case 0:
          hyp[pos] = "w" + std::to_string(rng.below(static_cast<uint64_t>(vocab)));
          break;
        case 1:
          hyp.insert(hyp.begin() + static_cast<long>(pos),
                     "w" + std::to_string(rng.below(static_cast<uint64_t>(vocab))));
          break;
        default:
          hyp.pop_back();
          break;
      }
    }
    hyps.push_back(std::move(hyp));
  }
  return hyps;
}

std::vector<std::string> toks(std::initializer_list<const char*> words) {
  return std::vector<std::string>(words.begin(), words.end());
}

}  // namespace

TEST_CASE("bleu: boundary scores") {
  const Corpus refs = {toks({"a", "b", "c", "d", "e"}), toks({"f", "g", "h", "i"})};
  CHECK(corpus_bleu(refs, refs) == doctest::Approx(100.0));

  const Corpus disjoint = {toks({"x", "y", "z", "w", "v"}), toks({"p", "q", "r", "s"})};
  CHECK(corpus_bleu(refs, disjoint) == 0.0);

  // any empty precision bucket zeroes the whole score: here every 4-gram misses
  const Corpus refs2 = {toks({"a", "b", "c", "d", "e"})};
  const Corpus hyp2 = {toks({"a", "b", "c", "x", "e"})};
  CHECK(corpus_bleu(refs2, hyp2) == 0.0);

  // hypotheses too short to hold any 4-gram zero the score as well
  const Corpus short_hyp = {toks({"a", "b", "c"})};
  CHECK(corpus_bleu(refs2, short_hyp) == 0.0);
}

TEST_CASE("bleu: hand-computed single pair") {
  // precisions 5/6, 3/5, 2/4, 1/3; equal lengths so no brevity penalty
  const Corpus ref = {toks({"a", "b", "c", "d", "e", "f"})};
  const Corpus hyp = {toks({"a", "b", "c", "d", "x", "f"})};
  const double want = 100.0 * std::pow(5.0 / 6.0 * 3.0 / 5.0 * 2.0 / 4.0 * 1.0 / 3.0, 0.25);
  CHECK(corpus_bleu(ref, hyp) == doctest::Approx(want).epsilon(1e-12));
  CHECK(corpus_bleu(ref, hyp) == doctest::Approx(53.728497).epsilon(1e-6));
}

TEST_CASE("bleu: brevity penalty for short hypotheses") {
  // perfect prefix: all precisions 1, penalty exp(1 - 8/6)
  const Corpus ref = {toks({"a", "b", "c", "d", "e", "f", "g", "h"})};
  const Corpus hyp = {toks({"a", "b", "c", "d", "e", "f"})};
  CHECK(corpus_bleu(ref, hyp) == doctest::Approx(100.0 * std::exp(1.0 - 8.0 / 6.0)));

  // longer-than-reference hypotheses pay through precision, not a penalty
  const Corpus hyp_long = {toks({"a", "b", "c", "d", "e", "f", "g", "h", "h"})};
  const double p1 = 8.0 / 9.0, p2 = 7.0 / 8.0, p3 = 6.0 / 7.0, p4 = 5.0 / 6.0;
  CHECK(corpus_bleu(ref, hyp_long) ==
        doctest::Approx(100.0 * std::pow(p1 * p2 * p3 * p4, 0.25)));
}

TEST_CASE("bleu: repeated n-grams are clipped to reference counts") {
  const Corpus ref = {toks({"the", "cat", "the", "dog", "sat", "here", "now"})};
  // "the" appears 3 times in the hypothesis but only twice in the reference
  const Corpus hyp = {toks({"the", "cat", "the", "dog", "the", "sat", "here"})};
  const double got = corpus_bleu(ref, hyp);
  CHECK(got == doctest::Approx(oracle_bleu(ref, hyp)).epsilon(1e-12));
  CHECK(got > 0.0);
}

TEST_CASE("bleu: agrees with the cross-check implementation on random corpora") {
  Rng rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    // small vocabularies force heavy n-gram overlap; larger ones sparse overlap
    const int vocab = 3 + static_cast<int>(rng.below(12));
    const size_t sentences = 1 + rng.below(12);
    const Corpus refs = random_corpus(rng, sentences, vocab, 4, 14);
    const Corpus hyps = perturb(refs, rng, vocab);
    const double got = corpus_bleu(refs, hyps);
    const double want = oracle_bleu(refs, hyps);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("bleu: corpus score is permutation-invariant and order-sensitive") {
  Rng rng(72);
  const Corpus refs = random_corpus(rng, 8, 6, 5, 12);
  const Corpus hyps = perturb(refs, rng, 6);
  const double base = corpus_bleu(refs, hyps);

  std::vector<size_t> order(refs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  Corpus refs_p, hyps_p;
  for (size_t i : order) {
    refs_p.push_back(refs[i]);
    hyps_p.push_back(hyps[i]);
  }
  CHECK(corpus_bleu(refs_p, hyps_p) == doctest::Approx(base).epsilon(1e-12));

  // corpus pooling is not a mean of per-sentence scores
  double mean_sentence = 0.0;
  for (size_t i = 0; i < refs.size(); ++i)
    mean_sentence += corpus_bleu({refs[i]}, {hyps[i]});
  mean_sentence /= static_cast<double>(refs.size());
  CHECK(base != doctest::Approx(mean_sentence).epsilon(1e-6));
}

TEST_CASE("bleu: input validation") {
  const Corpus one = {toks({"a", "b", "c", "d"})};
  CHECK_THROWS_AS(corpus_bleu(one, Corpus{}), std::invalid_argument);
  CHECK_THROWS_AS(corpus_bleu(Corpus{}, Corpus{}), std::invalid_argument);
  CHECK_NOTHROW(corpus_bleu(one, {toks({})}));  // empty hypothesis scores 0
  CHECK(corpus_bleu(one, {toks({})}) == 0.0);
}

TEST_CASE("senti delta: mean absolute standardized difference") {
  CHECK(senti_delta({{0.3, -0.1}}) == doctest::Approx(0.4));
  CHECK(senti_delta({{0.2, 0.2}, {-0.4, -0.4}}) == 0.0);
  CHECK(senti_delta({{0.5, -0.5}, {0.0, 0.25}}) == doctest::Approx((1.0 + 0.25) / 2));
  CHECK_THROWS_AS(senti_delta({}), std::invalid_argument);

  // ten-pair fixture against a direct running sum
  Rng rng(9);
  std::vector<std::pair<double, double>> pairs;
  double want = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double a = rng.uniform(-0.5, 0.5), b = rng.uniform(-0.5, 0.5);
    pairs.push_back({a, b});
    want += std::abs(a - b);
  }
  CHECK(senti_delta(pairs) == doctest::Approx(want / 10.0).epsilon(1e-12));
}

TEST_CASE("senti acc: sign agreement with zero reading as positive") {
  CHECK(senti_acc({{0.2, 0.4}, {-0.1, -0.3}}) == 100.0);
  CHECK(senti_acc({{0.2, -0.4}, {-0.1, -0.3}}) == 50.0);
  CHECK(senti_acc({{0.0, 0.3}}) == 100.0);   // zero pairs with positive
  CHECK(senti_acc({{0.0, -0.3}}) == 0.0);    // but not with negative
  CHECK(senti_acc({{0.0, 0.0}}) == 100.0);
  CHECK_THROWS_AS(senti_acc({}), std::invalid_argument);

  // twenty-pair fixture against an exhaustive count
  Rng rng(10);
  std::vector<std::pair<double, double>> pairs;
  int same = 0;
  for (int i = 0; i < 20; ++i) {
    const double a = rng.uniform(-0.5, 0.5), b = rng.uniform(-0.5, 0.5);
    pairs.push_back({a, b});
    if ((a >= 0) == (b >= 0)) ++same;
  }
  CHECK(senti_acc(pairs) == doctest::Approx(5.0 * same).epsilon(1e-12));
}

TEST_CASE("aggregate means: hand-verified accuracy/bleu rows") {
  // Benchmark operating points with their aggregate means; expectations
  // verified by hand to the displayed precision.
  struct Row {
    double acc, bleu, g2, h2;
  };
  const std::vector<Row> rows = {
      {48.83, 1.80, 9.38, 3.47},    {49.26, 18.78, 30.41, 27.19},
      {49.56, 2.77, 11.72, 5.25},   {49.43, 0.26, 3.58, 0.52},
      {49.73, 76.38, 61.63, 60.24}, {49.68, 61.78, 55.40, 55.07},
      {40.87, 1.98, 9.00, 3.78},    {49.64, 9.28, 21.46, 15.64},
      {46.77, 4.85, 15.06, 8.79},   {48.94, 0.49, 4.90, 0.97},
      {47.82, 74.31, 59.61, 58.19}, {49.09, 62.92, 55.58, 55.15},
  };
  for (const Row& row : rows) {
    const auto [g2, h2] = g2_h2(row.acc, row.bleu);
    CHECK(std::abs(g2 - row.g2) < 0.01);
    CHECK(std::abs(h2 - row.h2) < 0.01);
  }
}

TEST_CASE("aggregate means: algebraic properties") {
  // equal inputs pass through both means unchanged
  for (double x : {0.0, 1.0, 37.5, 100.0}) {
    const auto [g2, h2] = g2_h2(x, x);
    CHECK(g2 == doctest::Approx(x));
    CHECK(h2 == doctest::Approx(x));
  }

  const auto [g0, h0] = g2_h2(0.0, 0.0);
  CHECK(g0 == 0.0);
  CHECK(h0 == 0.0);  // defined as zero, not NaN

  const auto [g1, h1] = g2_h2(0.0, 80.0);
  CHECK(g1 == 0.0);
  CHECK(h1 == 0.0);

  // harmonic <= geometric <= arithmetic across a sampled grid
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(0.0, 100.0), b = rng.uniform(0.0, 100.0);
    const auto [g2, h2] = g2_h2(a, b);
    CHECK(h2 <= g2 + 1e-12);
    CHECK(g2 <= (a + b) / 2.0 + 1e-12);
    CHECK(g2 >= std::min(a, b) - 1e-12);
    CHECK(g2 <= std::max(a, b) + 1e-12);
  }
}

TEST_CASE("evaluation report: assembly and serialization") {
  Rng rng(13);
  const Corpus inputs = random_corpus(rng, 6, 8, 5, 10);
  const Corpus outputs = perturb(inputs, rng, 8);
  std::vector<std::pair<double, double>> scores;
  for (size_t i = 0; i < inputs.size(); ++i)
    scores.push_back({rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)});

  const EvalReport rep = evaluate_pairs(inputs, outputs, scores);
  CHECK(rep.senti_delta == doctest::Approx(senti_delta(scores)));
  CHECK(rep.senti_acc == doctest::Approx(senti_acc(scores)));
  CHECK(rep.bleu == doctest::Approx(corpus_bleu(inputs, outputs)));
  const auto [g2, h2] = g2_h2(rep.senti_acc, rep.bleu);
  CHECK(rep.g2 == doctest::Approx(g2));
  CHECK(rep.h2 == doctest::Approx(h2));
  CHECK(rep.h2 <= rep.g2 + 1e-12);

  const std::string records = rep.to_records();
  for (const char* key : {"senti_delta=", "senti_acc=", "bleu=", "g2=", "h2="})
    CHECK(records.find(key) != std::string::npos);
  CHECK(rep.to_table().find("senti delta") != std::string::npos);

  std::vector<std::pair<double, double>> short_scores(scores.begin(), scores.end() - 1);
  CHECK_THROWS_AS(evaluate_pairs(inputs, outputs, short_scores), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_pairs(Corpus{}, Corpus{}, {}), std::invalid_argument);
}

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ironic::eval {

// Corpus-level BLEU in [0,100]: n-grams 1-4, uniform weights, brevity
// penalty, no smoothing (any empty n-gram precision zeroes the score).
// References and hypotheses are aligned token lists; throws
// std::invalid_argument on a length mismatch or empty corpus.
double corpus_bleu(const std::vector<std::vector<std::string>>& references,
                   const std::vector<std::vector<std::string>>& hypotheses);

// Mean |STD(in) - STD(out)| over (input, output) standardized-score pairs.
double senti_delta(const std::vector<std::pair<double, double>>& std_pairs);

// Percentage of pairs whose standardized scores share a sign; zero counts as
// positive.
double senti_acc(const std::vector<std::pair<double, double>>& std_pairs);

// Geometric and harmonic means of (senti_acc, bleu), both on the 0-100
// scale; harmonic mean defined as 0 when both inputs are 0.
std::pair<double, double> g2_h2(double acc, double bleu);

struct EvalReport {
  double senti_delta = 0.0;
  double senti_acc = 0.0;  // percentage
  double bleu = 0.0;       // 0-100
  double g2 = 0.0;
  double h2 = 0.0;

  std::string to_table() const;    // human-readable
  std::string to_records() const;  // line-delimited key=value
};

// Full report over aligned corpora. `std_scores` carries one
// (standardized input score, standardized output score) pair per sentence,
// computed by the caller with the style-appropriate scorers.
EvalReport evaluate_pairs(const std::vector<std::vector<std::string>>& inputs,
                          const std::vector<std::vector<std::string>>& outputs,
                          const std::vector<std::pair<double, double>>& std_scores);

}  // namespace ironic::eval

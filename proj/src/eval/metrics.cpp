#include "ironic/eval/metrics.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ironic::eval {

namespace {

using NgramCounts = std::map<std::vector<std::string>, long>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<long>(i),
                                      tokens.begin() + static_cast<long>(i + n))];
  return counts;
}

}  // namespace

double corpus_bleu(const std::vector<std::vector<std::string>>& references,
                   const std::vector<std::vector<std::string>>& hypotheses) {
  if (references.size() != hypotheses.size()) {
    std::ostringstream os;
    os << "bleu: " << references.size() << " references vs " << hypotheses.size()
       << " hypotheses";
    throw std::invalid_argument(os.str());
  }
  if (references.empty()) throw std::invalid_argument("bleu: empty corpus");

  constexpr size_t kMaxOrder = 4;
  long matched[kMaxOrder] = {0, 0, 0, 0};
  long total[kMaxOrder] = {0, 0, 0, 0};
  long ref_len = 0, hyp_len = 0;

  for (size_t i = 0; i < references.size(); ++i) {
    ref_len += static_cast<long>(references[i].size());
    hyp_len += static_cast<long>(hypotheses[i].size());
    for (size_t n = 1; n <= kMaxOrder; ++n) {
      const NgramCounts ref = count_ngrams(references[i], n);
      const NgramCounts hyp = count_ngrams(hypotheses[i], n);
      for (const auto& [gram, c] : hyp) {
        total[n - 1] += c;
        const auto it = ref.find(gram);
        if (it != ref.end()) matched[n - 1] += std::min(c, it->second);
      }
    }
  }

  double log_precision_sum = 0.0;
  for (size_t n = 0; n < kMaxOrder; ++n) {
    if (matched[n] == 0 || total[n] == 0) return 0.0;  // add-zero: no smoothing
    log_precision_sum +=
        std::log(static_cast<double>(matched[n]) / static_cast<double>(total[n]));
  }
  const double bp =
      hyp_len >= ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  return 100.0 * bp * std::exp(log_precision_sum / static_cast<double>(kMaxOrder));
}

double senti_delta(const std::vector<std::pair<double, double>>& std_pairs) {
  if (std_pairs.empty()) throw std::invalid_argument("senti_delta: empty pair list");
  double sum = 0.0;
  for (const auto& [in, out] : std_pairs) sum += std::abs(in - out);
  return sum / static_cast<double>(std_pairs.size());
}

double senti_acc(const std::vector<std::pair<double, double>>& std_pairs) {
  if (std_pairs.empty()) throw std::invalid_argument("senti_acc: empty pair list");
  long same = 0;
  auto positive = [](double v) { return v >= 0.0; };  // zero reads as positive
  for (const auto& [in, out] : std_pairs)
    if (positive(in) == positive(out)) ++same;
  return 100.0 * static_cast<double>(same) / static_cast<double>(std_pairs.size());
}

std::pair<double, double> g2_h2(double acc, double bleu) {
  const double g2 = std::sqrt(acc * bleu);
  const double h2 = (acc + bleu) > 0.0 ? 2.0 * acc * bleu / (acc + bleu) : 0.0;
  return {g2, h2};
}

std::string EvalReport::to_table() const {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed;
  os << "metric        value\n"
     << "-----------  ------\n"
     << "senti delta  " << senti_delta << "\n"
     << "senti acc    " << senti_acc << "\n"
     << "bleu         " << bleu << "\n"
     << "g2           " << g2 << "\n"
     << "h2           " << h2 << "\n";
  return os.str();
}

std::string EvalReport::to_records() const {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  os << "senti_delta=" << senti_delta << "\n"
     << "senti_acc=" << senti_acc << "\n"
     << "bleu=" << bleu << "\n"
     << "g2=" << g2 << "\n"
     << "h2=" << h2 << "\n";
  return os.str();
}

EvalReport evaluate_pairs(const std::vector<std::vector<std::string>>& inputs,
                          const std::vector<std::vector<std::string>>& outputs,
                          const std::vector<std::pair<double, double>>& std_scores) {
  if (inputs.size() != outputs.size() || inputs.size() != std_scores.size())
    throw std::invalid_argument("evaluate_pairs: misaligned inputs");
  EvalReport rep;
  rep.senti_delta = senti_delta(std_scores);
  rep.senti_acc = senti_acc(std_scores);
  rep.bleu = corpus_bleu(inputs, outputs);
  const auto [g2, h2] = g2_h2(rep.senti_acc, rep.bleu);
  rep.g2 = g2;
  rep.h2 = h2;
  return rep;
}

}  // namespace ironic::eval

#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ironic/text/normalize.hpp"
#include "ironic/types.hpp"

namespace ironic::text {

// Word -> polarity score in [-1, +1].
// File format: UTF-8 TSV, `word<TAB>score` per line.
class SentimentLexicon {
 public:
  static SentimentLexicon load(const std::string& path);

  void add(const std::string& word, double score);
  double score(const std::string& word) const;  // 0 for unknown words
  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, double> map_;
};

// Token counts over the full post-normalization corpus (built before the
// length/rarity pass; two-pass pipeline).
class FrequencyTable {
 public:
  FrequencyTable() = default;
  explicit FrequencyTable(const std::vector<CleanSentence>& corpus);

  long count(const std::string& token) const;
  void bump(const std::string& token) { ++map_[token]; }

 private:
  std::unordered_map<std::string, long> map_;
};

struct FilterConfig {
  int min_len = 10;
  int max_len = 40;
  long rare_below = 3;  // a token is rare when its corpus count is < this
  int max_rare = 2;     // reject when the sentence has more rare tokens than this
};

enum class FilterVerdict { keep, too_short, too_long, rare_words };

FilterVerdict length_and_rarity_filter(const CleanSentence& s, const FrequencyTable& freq,
                                       const FilterConfig& cfg = {});

// First tokens that mark a sentence as interrogative.
const std::unordered_set<std::string>& wh_word_set();

bool is_interrogative(const CleanSentence& s);

enum class GateVerdict { keep, interrogative, weak_sentiment };

// Applied to non-ironic candidates only: rejects interrogatives, keeps only
// sentences with at least one token whose |lexicon score| is strictly > 0.5.
// Throws std::invalid_argument when the lexicon is empty.
GateVerdict strong_sentiment_gate(const CleanSentence& s, const SentimentLexicon& lex,
                                  double min_abs_score = 0.5);

}  // namespace ironic::text

#include "ironic/text/filters.hpp"

#include <cmath>
#include <stdexcept>

#include "ironic/util/text_io.hpp"

namespace ironic::text {

SentimentLexicon SentimentLexicon::load(const std::string& path) {
  SentimentLexicon lex;
  for (const auto& row : read_tsv(path)) {
    if (row.size() != 2)
      throw std::runtime_error("lexicon file: expected `word<TAB>score`: " + path);
    lex.add(row[0], std::stod(row[1]));
  }
  return lex;
}

void SentimentLexicon::add(const std::string& word, double score) {
  if (score < -1.0 || score > 1.0 || !std::isfinite(score))
    throw std::invalid_argument("lexicon score out of [-1,1] for word: " + word);
  map_[to_lower(trim(word))] = score;
}

double SentimentLexicon::score(const std::string& word) const {
  auto it = map_.find(word);
  return it == map_.end() ? 0.0 : it->second;
}

FrequencyTable::FrequencyTable(const std::vector<CleanSentence>& corpus) {
  for (const auto& s : corpus)
    for (const auto& t : s.tokens) ++map_[t];
}

long FrequencyTable::count(const std::string& token) const {
  auto it = map_.find(token);
  return it == map_.end() ? 0 : it->second;
}

FilterVerdict length_and_rarity_filter(const CleanSentence& s, const FrequencyTable& freq,
                                       const FilterConfig& cfg) {
  int n = static_cast<int>(s.tokens.size());
  if (n < cfg.min_len) return FilterVerdict::too_short;
  if (n > cfg.max_len) return FilterVerdict::too_long;
  int rare = 0;
  for (const auto& t : s.tokens)
    if (freq.count(t) < cfg.rare_below) ++rare;
  return rare > cfg.max_rare ? FilterVerdict::rare_words : FilterVerdict::keep;
}

const std::unordered_set<std::string>& wh_word_set() {
  static const std::unordered_set<std::string> words = {
      "what", "why",  "how",  "when",  "where", "who",  "is",
      "are",  "do",   "does", "did",   "can",   "could", "would", "will"};
  return words;
}

bool is_interrogative(const CleanSentence& s) {
  if (s.tokens.empty()) return false;
  const std::string& last = s.tokens.back();
  if (!last.empty() && last.back() == '?') return true;
  return wh_word_set().count(s.tokens.front()) > 0;
}

GateVerdict strong_sentiment_gate(const CleanSentence& s, const SentimentLexicon& lex,
                                  double min_abs_score) {
  if (lex.empty()) throw std::invalid_argument("strong_sentiment_gate: empty lexicon");
  if (is_interrogative(s)) return GateVerdict::interrogative;
  for (const auto& t : s.tokens)
    if (std::abs(lex.score(t)) > min_abs_score) return GateVerdict::keep;
  return GateVerdict::weak_sentiment;
}

}  // namespace ironic::text

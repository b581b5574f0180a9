#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ironic/types.hpp"

namespace ironic::text {

// Placeholder surface forms shared with the vocabulary's reserved entries.
inline const std::string kNumberToken = "⟨number⟩";  // ⟨number⟩
inline const std::string kUserToken = "⟨user⟩";      // ⟨user⟩

struct RawPost {
  std::string text;
  bool is_retweet = false;
};

enum class RejectReason {
  retweet,
  non_english,
  empty_after_cleaning,
  too_short,
  too_long,
  rare_words,
  interrogative,
  weak_sentiment,
};

const char* reject_reason_name(RejectReason r);

// Abbreviation -> expansion phrase, case-insensitive lookup.
// File format: UTF-8 TSV, `abbrev<TAB>expansion` per line.
class AbbreviationDict {
 public:
  AbbreviationDict() = default;
  static AbbreviationDict load(const std::string& path);

  void add(const std::string& abbrev, const std::string& expansion);
  // Returns nullptr when the token is not an abbreviation.
  const std::string* find(const std::string& lowercase_token) const;
  size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, std::string> map_;  // keys lowercased
};

struct NormalizeOutcome {
  bool kept = false;
  RejectReason reason = RejectReason::empty_after_cleaning;
  CleanSentence sentence;
};

// Single-post tweet normalizer. All transforms are pure and deterministic:
//   retweets rejected; URLs removed; trailing hashtags dropped; interior
//   hashtags de-'#'-ed and segmented on case/underscore boundaries;
//   @mentions replaced by the user placeholder; elongations (runs of >=3 of
//   one letter) collapsed to 2, then 1 if the 2-form is not in the wordlist;
//   everything lowercased; abbreviations expanded; money/time/number
//   literals replaced by the number placeholder; immediate duplicate words
//   collapsed; finally the pluggable language filter runs.
struct NormalizerOptions {
  double english_fraction = 0.6;  // default language-filter threshold
};

class Normalizer {
 public:
  using Options = NormalizerOptions;

  Normalizer() = default;
  Normalizer(AbbreviationDict abbrevs, std::unordered_set<std::string> wordlist,
             Options opts = Options());

  // Overrides the default wordlist-fraction language filter.
  void set_language_filter(std::function<bool(const std::vector<std::string>&)> f) {
    lang_filter_ = std::move(f);
  }

  NormalizeOutcome normalize(const RawPost& post) const;

  bool in_wordlist(const std::string& w) const { return wordlist_.count(w) > 0; }

 private:
  bool english_enough(const std::vector<std::string>& tokens) const;

  AbbreviationDict abbrevs_;
  std::unordered_set<std::string> wordlist_;
  Options opts_;
  std::function<bool(const std::vector<std::string>&)> lang_filter_;
};

std::unordered_set<std::string> load_wordlist(const std::string& path);

// Exposed for tests: single-token helpers used by the normalizer.
bool is_url_token(const std::string& token);
bool is_number_literal(const std::string& lowercase_token);
std::vector<std::string> segment_hashtag(const std::string& tag_body);
std::string collapse_elongation(const std::string& lowercase_word,
                                const std::unordered_set<std::string>& wordlist);

}  // namespace ironic::text

#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ironic/types.hpp"

namespace ironic {

// Shared token vocabulary. Ids 0..5 are reserved, in this fixed order:
// PAD, BOS, EOS, UNK, ⟨number⟩, ⟨user⟩. Everything else is assigned
// most-frequent-first with lexicographic tie-break, truncated to the cap.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kNumber = 4;
  static constexpr int kUser = 5;
  static constexpr int kReservedCount = 6;

  Vocabulary();

  // min_count: tokens below this corpus count are dropped.
  // cap: total size bound, reserved entries included.
  // Throws std::invalid_argument when cap < number of reserved tokens or the
  // corpora are all empty.
  static Vocabulary build(const std::vector<StyledCorpus>& corpora, long min_count = 3,
                          int cap = 10000);

  int size() const { return static_cast<int>(id_to_token_.size()); }
  int id(const std::string& token) const;          // kUnk for OOV
  const std::string& token(int id) const;          // throws on out-of-range
  long count(int id) const { return counts_[id]; }

  // OOV -> UNK, appends EOS, truncates to max_len including the EOS.
  TokenIdSequence encode(const CleanSentence& s, Style style = Style::non_irony,
                         int max_len = kMaxLen) const;

  // Drops structural tokens (PAD/BOS/EOS); UNK and the placeholders decode
  // to their surface forms.
  CleanSentence decode(const TokenIdSequence& t) const;

  // `id<TAB>token<TAB>count` rows; platform-independent.
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  std::unordered_map<std::string, int> token_to_id_;
  std::vector<std::string> id_to_token_;
  std::vector<long> counts_;
};

}  // namespace ironic

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace ironic {

// Core scalar and dense types. 64-bit throughout so gradient checks stay tight.
using Scalar = double;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
using Index = Eigen::Index;

enum class Style { non_irony, irony };

inline const char* style_name(Style s) {
  return s == Style::irony ? "irony" : "non_irony";
}

inline Style opposite(Style s) {
  return s == Style::irony ? Style::non_irony : Style::irony;
}

// A tokenized, normalized sentence. Tokens are lowercase UTF-8 strings.
struct CleanSentence {
  std::vector<std::string> tokens;

  bool operator==(const CleanSentence& o) const { return tokens == o.tokens; }
  std::string joined() const;
};

struct StyledCorpus {
  Style style = Style::non_irony;
  std::vector<CleanSentence> sentences;
};

// Token ids for one sentence. Every id must be < vocabulary size and the
// sequence is capped at max_len (40) including the trailing EOS.
struct TokenIdSequence {
  std::vector<int> ids;
  Style style = Style::non_irony;

  int length() const { return static_cast<int>(ids.size()); }
  bool operator==(const TokenIdSequence& o) const {
    return ids == o.ids && style == o.style;
  }
};

constexpr int kMaxLen = 40;

}  // namespace ironic

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ironic/types.hpp"

namespace ironic::toy {

// Synthetic two-style corpus built from "i <verb> <context>" templates.
// The ironic style pairs a verb with a context of the opposite polarity
// (praising something unpleasant); the plain style keeps them consistent.
// Sentiment labels follow the context's polarity, so transferring style
// should flip the verb while keeping the context.
struct ToyDataset {
  StyledCorpus non_irony;
  StyledCorpus irony;
  // 1 = ironic; both styles mixed
  std::vector<std::pair<int, CleanSentence>> irony_labeled;
  // 1 = positive context; one set per style for the sentiment scorers
  std::vector<std::pair<int, CleanSentence>> senti_irony_labeled;
  std::vector<std::pair<int, CleanSentence>> senti_non_irony_labeled;
};

ToyDataset make_toy_dataset(int per_style, uint64_t seed);

// Every distinct surface word the generator can emit (useful for wordlists).
std::vector<std::string> toy_word_inventory();

}  // namespace ironic::toy

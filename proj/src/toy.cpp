#include "ironic/toy.hpp"

#include <set>
#include <stdexcept>

#include "ironic/util/rng.hpp"
#include "ironic/util/text_io.hpp"

namespace ironic::toy {

namespace {

// Polarity lives in the verb and in the paired context phrase; every other
// slot is neutral filler drawn independently, so sentences share almost no
// prefix and reconstruction cannot lean on a language-model shortcut.
const std::vector<std::string> kPositiveVerbs = {"love",     "enjoy", "adore",
                                                 "treasure", "cherish", "savor"};
const std::vector<std::string> kNegativeVerbs = {"hate",   "dread",  "despise",
                                                 "resent", "loathe", "detest"};

// two-token noun phrases
const std::vector<std::pair<std::string, std::string>> kNegativeContexts = {
    {"rainy", "mondays"},    {"broken", "elevators"}, {"traffic", "jams"},
    {"burnt", "toast"},      {"slow", "internet"},    {"crowded", "buses"},
    {"monday", "meetings"},  {"cold", "showers"},     {"soggy", "sandwiches"},
    {"noisy", "neighbors"},  {"leaky", "faucets"},    {"stale", "crackers"},
    {"itchy", "sweaters"},   {"muddy", "sidewalks"},  {"dusty", "attics"},
    {"gloomy", "basements"},
};
const std::vector<std::pair<std::string, std::string>> kPositiveContexts = {
    {"sunny", "weekends"},  {"fresh", "coffee"},   {"free", "pizza"},
    {"beach", "holidays"},  {"warm", "cookies"},   {"good", "music"},
    {"long", "naps"},       {"payday", "fridays"}, {"cozy", "blankets"},
    {"hot", "cocoa"},       {"quiet", "gardens"},  {"comfy", "couches"},
    {"sweet", "melons"},    {"shiny", "medals"},   {"gentle", "breezes"},
    {"crisp", "apples"},
};

const std::vector<std::string> kOpeners = {"frankly", "honestly", "look",  "listen",
                                           "well",    "seriously", "folks", "truly"};
const std::vector<std::string> kIntensifiers = {"really", "just",   "simply",
                                                "totally", "always", "absolutely"};
const std::vector<std::string> kPlaces = {"downtown", "upstairs",   "outside",
                                          "indoors",  "everywhere", "anywhere",
                                          "nearby",   "elsewhere"};
const std::vector<std::string> kTimes = {"today", "tonight",    "lately",  "nowadays",
                                         "daily", "constantly", "forever", "weekly"};

// sentence shapes; O I V A N P T mark the slots
const std::vector<std::vector<std::string>> kShapes = {
    {"O", "i", "I", "V", "A", "N", "P", "T"},
    {"i", "I", "V", "A", "N", "T"},
    {"O", "i", "V", "the", "A", "N", "P"},
    {"i", "V", "A", "N", "P", "T"},
};

CleanSentence realize(Rng& rng, const std::string& verb,
                      const std::pair<std::string, std::string>& ctx) {
  const auto& shape = kShapes[rng.below(kShapes.size())];
  const std::string& opener = kOpeners[rng.below(kOpeners.size())];
  const std::string& intens = kIntensifiers[rng.below(kIntensifiers.size())];
  const std::string& place = kPlaces[rng.below(kPlaces.size())];
  const std::string& time = kTimes[rng.below(kTimes.size())];

  CleanSentence s;
  s.tokens.reserve(shape.size());
  for (const std::string& slot : shape) {
    if (slot == "O")
      s.tokens.push_back(opener);
    else if (slot == "I")
      s.tokens.push_back(intens);
    else if (slot == "V")
      s.tokens.push_back(verb);
    else if (slot == "A")
      s.tokens.push_back(ctx.first);
    else if (slot == "N")
      s.tokens.push_back(ctx.second);
    else if (slot == "P")
      s.tokens.push_back(place);
    else if (slot == "T")
      s.tokens.push_back(time);
    else
      s.tokens.push_back(slot);
  }
  return s;
}

}  // namespace

ToyDataset make_toy_dataset(int per_style, uint64_t seed) {
  if (per_style < 2) throw std::invalid_argument("toy dataset needs at least 2 per style");
  ToyDataset ds;
  ds.non_irony.style = Style::non_irony;
  ds.irony.style = Style::irony;
  Rng rng(derive_seed(seed, "toy"));

  for (int i = 0; i < per_style; ++i) {
    // alternate the underlying sentiment so both label classes stay balanced
    const bool positive_ctx = (i % 2 == 0);
    const auto& contexts = positive_ctx ? kPositiveContexts : kNegativeContexts;
    const auto& ctx = contexts[rng.below(contexts.size())];

    // plain style: verb polarity matches the context
    const auto& plain_verbs = positive_ctx ? kPositiveVerbs : kNegativeVerbs;
    CleanSentence plain = realize(rng, plain_verbs[rng.below(plain_verbs.size())], ctx);
    ds.non_irony.sentences.push_back(plain);
    ds.senti_non_irony_labeled.emplace_back(positive_ctx ? 1 : 0, plain);
    ds.irony_labeled.emplace_back(0, plain);

    // ironic style: verb polarity contradicts the context
    const auto& ironic_ctx = contexts[rng.below(contexts.size())];
    const auto& ironic_verbs = positive_ctx ? kNegativeVerbs : kPositiveVerbs;
    CleanSentence ironic =
        realize(rng, ironic_verbs[rng.below(ironic_verbs.size())], ironic_ctx);
    ds.irony.sentences.push_back(ironic);
    ds.senti_irony_labeled.emplace_back(positive_ctx ? 1 : 0, ironic);
    ds.irony_labeled.emplace_back(1, ironic);
  }
  return ds;
}

std::vector<std::string> toy_word_inventory() {
  std::set<std::string> words = {"i", "the"};  // the only literal shape tokens
  for (const auto& bank : {kOpeners, kIntensifiers, kPlaces, kTimes})
    for (const auto& w : bank) words.insert(w);
  for (const auto& v : kPositiveVerbs) words.insert(v);
  for (const auto& v : kNegativeVerbs) words.insert(v);
  for (const auto& [a, b] : kNegativeContexts) {
    words.insert(a);
    words.insert(b);
  }
  for (const auto& [a, b] : kPositiveContexts) {
    words.insert(a);
    words.insert(b);
  }
  return {words.begin(), words.end()};
}

}  // namespace ironic::toy

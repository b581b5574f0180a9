#include "ironic/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "ironic/text/normalize.hpp"
#include "ironic/util/text_io.hpp"

namespace ironic {

namespace {
const std::vector<std::string>& reserved_tokens() {
  static const std::vector<std::string> toks = {
      "⟨pad⟩", "⟨bos⟩", "⟨eos⟩",
      "⟨unk⟩", text::kNumberToken, text::kUserToken};
  return toks;
}
}  // namespace

Vocabulary::Vocabulary() {
  for (const auto& t : reserved_tokens()) {
    token_to_id_[t] = static_cast<int>(id_to_token_.size());
    id_to_token_.push_back(t);
    counts_.push_back(0);
  }
}

Vocabulary Vocabulary::build(const std::vector<StyledCorpus>& corpora, long min_count,
                             int cap) {
  if (cap < kReservedCount)
    throw std::invalid_argument("vocabulary cap below reserved token count");
  size_t total = 0;
  for (const auto& c : corpora) total += c.sentences.size();
  if (total == 0) throw std::invalid_argument("vocabulary build: empty corpora");

  std::unordered_map<std::string, long> counts;
  for (const auto& c : corpora)
    for (const auto& s : c.sentences)
      for (const auto& t : s.tokens) ++counts[t];

  Vocabulary v;
  // placeholders are reserved; record their observed counts in place
  for (int id = 0; id < kReservedCount; ++id) {
    auto it = counts.find(v.id_to_token_[id]);
    if (it != counts.end()) {
      v.counts_[id] = it->second;
      counts.erase(it);
    }
  }

  std::vector<std::pair<std::string, long>> items;
  items.reserve(counts.size());
  for (const auto& [tok, n] : counts)
    if (n >= min_count) items.emplace_back(tok, n);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  for (const auto& [tok, n] : items) {
    if (v.size() >= cap) break;
    v.token_to_id_[tok] = v.size();
    v.id_to_token_.push_back(tok);
    v.counts_.push_back(n);
  }
  return v;
}

int Vocabulary::id(const std::string& token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size())
    throw std::out_of_range("vocabulary id out of range: " + std::to_string(id));
  return id_to_token_[id];
}

TokenIdSequence Vocabulary::encode(const CleanSentence& s, Style style, int max_len) const {
  TokenIdSequence t;
  t.style = style;
  int budget = max_len - 1;  // room for EOS
  for (const auto& tok : s.tokens) {
    if (static_cast<int>(t.ids.size()) >= budget) break;
    t.ids.push_back(id(tok));
  }
  t.ids.push_back(kEos);
  return t;
}

CleanSentence Vocabulary::decode(const TokenIdSequence& t) const {
  CleanSentence s;
  for (int id : t.ids) {
    if (id == kPad || id == kBos || id == kEos) continue;
    s.tokens.push_back(token(id));
  }
  return s;
}

void Vocabulary::save(const std::string& path) const {
  std::vector<std::string> lines;
  lines.reserve(size());
  for (int id = 0; id < size(); ++id)
    lines.push_back(std::to_string(id) + "\t" + id_to_token_[id] + "\t" +
                    std::to_string(counts_[id]));
  write_lines(path, lines);
}

Vocabulary Vocabulary::load(const std::string& path) {
  Vocabulary v;
  for (const auto& row : read_tsv(path)) {
    if (row.size() != 3)
      throw std::runtime_error("vocabulary file: expected `id<TAB>token<TAB>count`: " + path);
    int id = std::stoi(row[0]);
    if (id < kReservedCount) {
      if (id >= v.size() || v.id_to_token_[id] != row[1])
        throw std::runtime_error("vocabulary file: reserved row mismatch at id " + row[0]);
      v.counts_[id] = std::stol(row[2]);
      continue;
    }
    if (id != v.size())
      throw std::runtime_error("vocabulary file: non-contiguous id " + row[0]);
    v.token_to_id_[row[1]] = id;
    v.id_to_token_.push_back(row[1]);
    v.counts_.push_back(std::stol(row[2]));
  }
  return v;
}

}  // namespace ironic

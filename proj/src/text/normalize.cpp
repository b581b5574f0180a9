#include "ironic/text/normalize.hpp"

#include <cctype>
#include <stdexcept>

#include "ironic/util/text_io.hpp"

namespace ironic::text {

namespace {

bool is_lower_alpha(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper_alpha(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool all_alpha(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_lower_alpha(c) && !is_upper_alpha(c)) return false;
  return true;
}

// "12", "3.14", "1,200" style bodies (digits with . or , group separators)
bool digits_body(const std::string& s) {
  if (s.empty()) return false;
  bool saw_digit = false;
  bool prev_sep = true;  // leading separator not allowed
  for (char c : s) {
    if (is_digit(c)) {
      saw_digit = true;
      prev_sep = false;
    } else if (c == '.' || c == ',') {
      if (prev_sep) return false;
      prev_sep = true;
    } else {
      return false;
    }
  }
  return saw_digit && !prev_sep;
}

bool is_time_literal(const std::string& s) {
  // 12:30, 12:30:59, 5pm, 11:59pm
  size_t n = s.size();
  std::string body = s;
  if (n > 2 && (s.compare(n - 2, 2, "am") == 0 || s.compare(n - 2, 2, "pm") == 0))
    body = s.substr(0, n - 2);
  if (body.empty()) return false;
  if (digits_body(body) && body.size() <= 2 && body != s) return true;  // 5pm
  size_t colon = body.find(':');
  if (colon == std::string::npos) return false;
  std::string h = body.substr(0, colon);
  std::string rest = body.substr(colon + 1);
  if (h.empty() || h.size() > 2 || !digits_body(h)) return false;
  size_t colon2 = rest.find(':');
  std::string m = colon2 == std::string::npos ? rest : rest.substr(0, colon2);
  std::string sec = colon2 == std::string::npos ? "" : rest.substr(colon2 + 1);
  if (m.size() != 2 || !digits_body(m)) return false;
  if (!sec.empty() && (sec.size() != 2 || !digits_body(sec))) return false;
  return true;
}

bool is_money_literal(const std::string& s) {
  if (s.size() < 2) return false;
  if (s.front() == '$') return digits_body(s.substr(1));
  if (s.back() == '$') return digits_body(s.substr(0, s.size() - 1));
  return false;
}

}  // namespace

const char* reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::retweet: return "retweet";
    case RejectReason::non_english: return "non_english";
    case RejectReason::empty_after_cleaning: return "empty_after_cleaning";
    case RejectReason::too_short: return "too_short";
    case RejectReason::too_long: return "too_long";
    case RejectReason::rare_words: return "rare_words";
    case RejectReason::interrogative: return "interrogative";
    case RejectReason::weak_sentiment: return "weak_sentiment";
  }
  return "unknown";
}

AbbreviationDict AbbreviationDict::load(const std::string& path) {
  AbbreviationDict d;
  for (const auto& row : read_tsv(path)) {
    if (row.size() != 2)
      throw std::runtime_error("abbreviation file: expected `abbrev<TAB>expansion`: " + path);
    d.add(row[0], row[1]);
  }
  return d;
}

void AbbreviationDict::add(const std::string& abbrev, const std::string& expansion) {
  map_[to_lower(trim(abbrev))] = to_lower(trim(expansion));
}

const std::string* AbbreviationDict::find(const std::string& lowercase_token) const {
  auto it = map_.find(lowercase_token);
  return it == map_.end() ? nullptr : &it->second;
}

std::unordered_set<std::string> load_wordlist(const std::string& path) {
  std::unordered_set<std::string> set;
  for (const auto& line : read_lines(path)) {
    std::string w = to_lower(trim(line));
    if (!w.empty() && w[0] != '#') set.insert(w);
  }
  return set;
}

bool is_url_token(const std::string& token) {
  std::string t = to_lower(token);
  return t.rfind("http://", 0) == 0 || t.rfind("https://", 0) == 0 ||
         t.rfind("www.", 0) == 0;
}

bool is_number_literal(const std::string& t) {
  return digits_body(t) || is_money_literal(t) || is_time_literal(t);
}

std::vector<std::string> segment_hashtag(const std::string& body) {
  // split on case transitions (lower->upper) and underscores
  std::vector<std::string> parts;
  std::string cur;
  char prev = 0;
  for (char c : body) {
    if (c == '_') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
      prev = 0;
      continue;
    }
    if (is_upper_alpha(c) && is_lower_alpha(prev) && !cur.empty()) {
      parts.push_back(cur);
      cur.clear();
    }
    cur += c;
    prev = c;
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

std::string collapse_elongation(const std::string& w,
                                const std::unordered_set<std::string>& wordlist) {
  if (!all_alpha(w)) return w;
  std::string two, one;
  bool had_run = false;
  size_t i = 0;
  while (i < w.size()) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    size_t run = j - i;
    if (run >= 3) had_run = true;
    size_t keep2 = run >= 3 ? 2 : run;
    size_t keep1 = run >= 3 ? 1 : run;
    two.append(keep2, w[i]);
    one.append(keep1, w[i]);
    i = j;
  }
  if (!had_run) return w;
  return wordlist.count(two) ? two : one;
}

Normalizer::Normalizer(AbbreviationDict abbrevs, std::unordered_set<std::string> wordlist,
                       Options opts)
    : abbrevs_(std::move(abbrevs)), wordlist_(std::move(wordlist)), opts_(opts) {}

bool Normalizer::english_enough(const std::vector<std::string>& tokens) const {
  if (lang_filter_) return lang_filter_(tokens);
  size_t alpha = 0, known = 0;
  for (const auto& t : tokens) {
    if (!all_alpha(t)) continue;  // placeholders, numbers, punctuation don't count
    ++alpha;
    if (wordlist_.count(t)) ++known;
  }
  if (alpha == 0) return true;
  return static_cast<double>(known) / static_cast<double>(alpha) >= opts_.english_fraction;
}

NormalizeOutcome Normalizer::normalize(const RawPost& post) const {
  NormalizeOutcome out;
  if (post.is_retweet) {
    out.reason = RejectReason::retweet;
    return out;
  }

  std::vector<std::string> raw_tokens;
  for (const auto& tok : split_ws(post.text)) {
    if (is_url_token(tok)) continue;
    raw_tokens.push_back(tok);
  }

  // hashtags attached at the end are dropped entirely
  while (!raw_tokens.empty() && raw_tokens.back().size() > 1 &&
         raw_tokens.back()[0] == '#')
    raw_tokens.pop_back();

  std::vector<std::string> tokens;
  auto emit_word = [&](const std::string& piece) {
    std::string w = collapse_elongation(to_lower(piece), wordlist_);
    if (w.empty()) return;
    if (const std::string* exp = abbrevs_.find(w)) {
      for (const auto& part : split_ws(*exp)) tokens.push_back(part);
      return;
    }
    tokens.push_back(is_number_literal(w) ? kNumberToken : w);
  };

  for (const auto& tok : raw_tokens) {
    if (tok.size() > 1 && tok[0] == '@') {
      tokens.push_back(kUserToken);
      continue;
    }
    if (tok.size() > 1 && tok[0] == '#') {
      for (const auto& part : segment_hashtag(tok.substr(1))) emit_word(part);
      continue;
    }
    emit_word(tok);
  }

  // collapse immediate duplicates
  std::vector<std::string> dedup;
  for (auto& t : tokens) {
    if (!dedup.empty() && dedup.back() == t) continue;
    dedup.push_back(std::move(t));
  }

  if (dedup.empty()) {
    out.reason = RejectReason::empty_after_cleaning;
    return out;
  }
  if (!english_enough(dedup)) {
    out.reason = RejectReason::non_english;
    return out;
  }
  out.kept = true;
  out.sentence.tokens = std::move(dedup);
  return out;
}

}  // namespace ironic::text

#include "ironic/text/pipeline.hpp"

#include <string>

namespace ironic::text {

PipelineResult run_pipeline(const std::vector<std::string>& lines, const Normalizer& norm,
                            const PipelineConfig& cfg) {
  PipelineResult res;
  struct Stage1 {
    long line_no;
    CleanSentence sentence;
  };
  std::vector<Stage1> normalized;

  for (size_t i = 0; i < lines.size(); ++i) {
    long line_no = static_cast<long>(i) + 1;
    RawPost post;
    post.text = lines[i];
    if (!cfg.retweet_prefix.empty() &&
        lines[i].rfind(cfg.retweet_prefix, 0) == 0)
      post.is_retweet = true;
    NormalizeOutcome out = norm.normalize(post);
    if (!out.kept) {
      res.rejects.push_back({line_no, out.reason});
      continue;
    }
    normalized.push_back({line_no, std::move(out.sentence)});
  }

  std::vector<CleanSentence> stage1_corpus;
  stage1_corpus.reserve(normalized.size());
  for (const auto& s : normalized) stage1_corpus.push_back(s.sentence);
  FrequencyTable freq(stage1_corpus);

  for (auto& s : normalized) {
    switch (length_and_rarity_filter(s.sentence, freq, cfg.filter)) {
      case FilterVerdict::keep:
        res.kept.push_back(std::move(s.sentence));
        res.kept_line_no.push_back(s.line_no);
        break;
      case FilterVerdict::too_short:
        res.rejects.push_back({s.line_no, RejectReason::too_short});
        break;
      case FilterVerdict::too_long:
        res.rejects.push_back({s.line_no, RejectReason::too_long});
        break;
      case FilterVerdict::rare_words:
        res.rejects.push_back({s.line_no, RejectReason::rare_words});
        break;
    }
  }
  return res;
}

std::vector<std::string> reject_log_lines(const std::vector<Reject>& rejects) {
  std::vector<std::string> out;
  out.reserve(rejects.size());
  for (const auto& r : rejects)
    out.push_back(std::to_string(r.line_no) + "\t" + reject_reason_name(r.reason));
  return out;
}

SplitResult split_by_style(const std::vector<CleanSentence>& sentences,
                           const std::function<double(const CleanSentence&)>& score,
                           double threshold, const SentimentLexicon& lex) {
  SplitResult res;
  res.irony.style = Style::irony;
  res.non_irony.style = Style::non_irony;
  for (size_t i = 0; i < sentences.size(); ++i) {
    const CleanSentence& s = sentences[i];
    if (score(s) >= threshold) {
      res.irony.sentences.push_back(s);
      continue;
    }
    switch (strong_sentiment_gate(s, lex)) {
      case GateVerdict::keep:
        res.non_irony.sentences.push_back(s);
        break;
      case GateVerdict::interrogative:
        res.gate_rejects.emplace_back(i, RejectReason::interrogative);
        break;
      case GateVerdict::weak_sentiment:
        res.gate_rejects.emplace_back(i, RejectReason::weak_sentiment);
        break;
    }
  }
  return res;
}

}  // namespace ironic::text

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ironic/text/filters.hpp"
#include "ironic/text/normalize.hpp"
#include "ironic/types.hpp"

namespace ironic::text {

struct PipelineConfig {
  std::string retweet_prefix = "RT ";
  FilterConfig filter;
};

struct Reject {
  long line_no = 0;  // 1-based input line
  RejectReason reason = RejectReason::empty_after_cleaning;
};

struct PipelineResult {
  std::vector<CleanSentence> kept;
  std::vector<long> kept_line_no;  // parallel to kept
  std::vector<Reject> rejects;
};

// Two-pass file-to-file pipeline: pass 1 normalizes every post and builds
// the corpus frequency table, pass 2 applies the length/rarity filter.
// Output order equals input order; the whole run is deterministic.
PipelineResult run_pipeline(const std::vector<std::string>& lines, const Normalizer& norm,
                            const PipelineConfig& cfg = {});

// `line_no<TAB>reason` rows for the reject log.
std::vector<std::string> reject_log_lines(const std::vector<Reject>& rejects);

struct SplitResult {
  StyledCorpus irony;
  StyledCorpus non_irony;
  // indices (into the input vector) rejected by the sentiment gate, with reason
  std::vector<std::pair<size_t, RejectReason>> gate_rejects;
};

// Routes each sentence by the irony score at the calibrated threshold
// (score >= threshold -> irony). The non-irony partition then passes the
// strong-sentiment gate. `score` must throw if its model is untrained.
SplitResult split_by_style(const std::vector<CleanSentence>& sentences,
                           const std::function<double(const CleanSentence&)>& score,
                           double threshold, const SentimentLexicon& lex);

}  // namespace ironic::text

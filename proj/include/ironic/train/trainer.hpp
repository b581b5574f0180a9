#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ironic/model/classifier.hpp"
#include "ironic/model/noise.hpp"
#include "ironic/model/transformer.hpp"
#include "ironic/nn/adam.hpp"
#include "ironic/train/config.hpp"
#include "ironic/train/rewards.hpp"

namespace ironic::train {

// The frozen scorers the rewards are computed against. The irony classifier
// covers both directions; the two sentiment scorers are style-specific.
struct ClassifierBundle {
  model::TextClassifier* irony = nullptr;
  model::CalibratedSentimentScorer senti_irony;      // scores ironic-side text
  model::CalibratedSentimentScorer senti_non_irony;  // scores non-ironic-side text
};

struct EpochRecord {
  int epoch = 0;            // 1-based across the whole schedule
  std::string phase;        // dae | bt | rl
  std::string direction;    // both (each epoch covers both styles/directions)
  double loss = 0.0;        // mean per-sentence loss over the epoch
  double rw_irony = 0.0;    // RL only: mean raw rewards over the epoch
  double rw_senti = 0.0;
  double rw = 0.0;

  std::string to_line() const;
  // Parses a to_line() record; returns nothing on malformed input.
  static std::optional<EpochRecord> from_line(const std::string& line);
};

struct RlStepDiag {
  double loss = 0.0;
  double mean_rw_irony = 0.0;
  double mean_rw_senti = 0.0;
  double mean_rw = 0.0;
  int samples = 0;
};

struct RunResult {
  std::vector<EpochRecord> records;
};

class Trainer {
 public:
  // All referenced objects must outlive the trainer. `log` may be null.
  Trainer(model::DualSeq2Seq& m, ClassifierBundle classifiers, TrainingConfig cfg,
          std::ostream* log = nullptr);

  // Mean denoising-reconstruction loss over the batch; noise drawn from
  // `noise_rng`, clean sentences as targets, per-style autoencoder path.
  double dae_loss(const std::vector<TokenIdSequence>& batch, Style style,
                  Rng& noise_rng, bool apply_update = true);

  // Mean back-translation reconstruction loss. The pseudo-source is produced
  // by the opposite-style decoder greedily with no gradient; gradient flows
  // through the reconstruction path only.
  double bt_loss(const std::vector<TokenIdSequence>& batch, Style src_style,
                 bool apply_update = true);

  // One policy-gradient step on a batch of src_style sentences. Samples the
  // transfer, scores rewards against the frozen classifiers, subtracts the
  // batch-mean baseline, and ascends expected reward. `reward_offset` exists
  // for the baseline-neutrality check and shifts every reward by a constant.
  // Throws std::runtime_error naming the sample on a non-finite loss.
  RlStepDiag rl_step(const std::vector<TokenIdSequence>& batch, Style src_style,
                     Rng& sample_rng, bool apply_update = true,
                     double reward_offset = 0.0);

  // Reward assembly for one (source, transferred) pair, direction-aware.
  RewardBundle compute_rewards(const std::vector<int>& src_ids,
                               const std::vector<int>& out_ids, Style src_style);

  // Full schedule: denoising pretraining, back-translation pretraining, then
  // alternating RL with an interval-p back-translation update. Writes phase
  // and per-epoch checkpoints into `ckpt_dir` unless it is empty.
  RunResult run_algorithm1(const std::vector<TokenIdSequence>& non_irony,
                           const std::vector<TokenIdSequence>& irony,
                           const std::string& ckpt_dir);

  nn::Adam& optimizer() { return adam_; }
  const TrainingConfig& config() const { return cfg_; }

 private:
  std::vector<std::vector<TokenIdSequence>> make_batches(
      std::vector<TokenIdSequence> data, Rng& order_rng) const;
  void emit(const EpochRecord& rec, RunResult& result);
  void save_ckpt(const std::string& dir, const std::string& name) const;

  model::DualSeq2Seq& model_;
  ClassifierBundle cls_;
  TrainingConfig cfg_;
  nn::Adam adam_;
  std::ostream* log_;
};

}  // namespace ironic::train

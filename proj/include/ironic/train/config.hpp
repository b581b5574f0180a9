#pragma once

#include <cstdint>
#include <string>

namespace ironic::train {

// Every knob of the training schedule. Serialized as `key = value` text;
// unknown keys are an error so typos cannot silently fall back to defaults.
struct TrainingConfig {
  double lr = 1e-5;
  int batch_size = 32;      // K
  double beta = 0.5;        // harmonic weight in the overall reward
  int interval_p = 200;     // back-translation update every p-th batch
  int pretrain_epochs = 6;  // first half denoising, second half back-translation
  int rl_epochs = 15;
  int max_len = 40;
  uint64_t seed = 1;
  double temperature = 1.0;  // sampling temperature for RL generation
  double rep_penalty = 2.0;  // inference-time repetition penalty (not used in training)
  double clamp_eps = 1e-4;   // reward clamp lower bound
  double clip_norm = 0.0;    // 0 disables gradient clipping
  double noise_delete = 0.1;
  double noise_duplicate = 0.1;
  double noise_swap = 0.1;
  double word_dropout = 0.0;  // teacher-forced prefix corruption during pretraining
  bool use_baseline = true;
  bool disable_irony_reward = false;
  bool disable_senti_reward = false;
  bool disable_bt = false;          // skip interval back-translation during RL
  bool raw_prob_objective = false;  // literal raw-probability objective (short tests)

  int dae_epochs() const { return (pretrain_epochs + 1) / 2; }
  int bt_epochs() const { return pretrain_epochs - dae_epochs(); }

  // Throws std::invalid_argument naming the first offending field.
  void validate() const;

  static TrainingConfig load(const std::string& path);
  void save(const std::string& path) const;
  std::string to_text() const;
};

}  // namespace ironic::train

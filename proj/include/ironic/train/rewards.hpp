#pragma once

namespace ironic::train {

// Pure reward arithmetic. Sentence scoring lives in the trainer; these
// functions are the hand-checkable formulas.

// Style gain: probability of the target style after transfer minus before.
// For non-irony -> irony this is p(s|out) - p(s|in); the reverse direction
// negates it.
double irony_reward(double p_in, double p_out);

// 1 - |STD(in) - STD(out)| on standardized sentiment scores. May be negative;
// the raw value is kept for diagnostics and clamped before combination.
double sentiment_reward(double std_in, double std_out);

double clamp_unit(double r, double eps);

// Weighted harmonic combination (1+b^2)*s*i / (b^2*s + i) of already-clamped
// components; equal inputs return themselves.
double overall_reward(double rw_senti_clamped, double rw_irony_clamped, double beta);

struct RewardBundle {
  double rw_irony = 0.0;          // raw, in (-1, 1)
  double rw_senti = 0.0;          // raw, <= 1, may be negative
  double rw_irony_clamped = 0.0;  // in [eps, 1]
  double rw_senti_clamped = 0.0;  // in [eps, 1]
  double rw = 0.0;                // combined, in [eps, 1]
};

// Clamps both raw rewards and combines them. Ablation switches replace the
// combined reward with the surviving component (or 1.0 when both are off).
RewardBundle assemble_rewards(double rw_irony_raw, double rw_senti_raw, double beta,
                              double eps = 1e-4, bool use_irony = true,
                              bool use_senti = true);

}  // namespace ironic::train

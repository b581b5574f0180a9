#include "ironic/train/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ironic::train {

double irony_reward(double p_in, double p_out) { return p_out - p_in; }

double sentiment_reward(double std_in, double std_out) {
  return 1.0 - std::abs(std_in - std_out);
}

double clamp_unit(double r, double eps) { return std::min(1.0, std::max(eps, r)); }

double overall_reward(double rw_senti_clamped, double rw_irony_clamped, double beta) {
  if (!(beta > 0)) throw std::invalid_argument("overall_reward: beta must be positive");
  const double b2 = beta * beta;
  return (1.0 + b2) * rw_senti_clamped * rw_irony_clamped /
         (b2 * rw_senti_clamped + rw_irony_clamped);
}

RewardBundle assemble_rewards(double rw_irony_raw, double rw_senti_raw, double beta,
                              double eps, bool use_irony, bool use_senti) {
  RewardBundle b;
  b.rw_irony = rw_irony_raw;
  b.rw_senti = rw_senti_raw;
  b.rw_irony_clamped = clamp_unit(rw_irony_raw, eps);
  b.rw_senti_clamped = clamp_unit(rw_senti_raw, eps);
  if (use_irony && use_senti)
    b.rw = overall_reward(b.rw_senti_clamped, b.rw_irony_clamped, beta);
  else if (use_irony)
    b.rw = b.rw_irony_clamped;
  else if (use_senti)
    b.rw = b.rw_senti_clamped;
  else
    b.rw = 1.0;  // both rewards ablated: constant signal
  return b;
}

}  // namespace ironic::train

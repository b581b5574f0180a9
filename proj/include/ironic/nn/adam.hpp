#pragma once

#include <unordered_map>

#include "ironic/nn/graph.hpp"

namespace ironic::nn {

struct AdamConfig {
  Scalar lr = 1e-5;
  Scalar beta1 = 0.9;
  Scalar beta2 = 0.999;
  Scalar eps = 1e-8;
  Scalar clip_norm = 0.0;  // 0 disables global-norm clipping
};

// Adam with bias correction. Moment buffers are keyed by parameter name and
// created lazily, so one optimizer can only ever serve one ParameterSet.
class Adam {
 public:
  explicit Adam(AdamConfig cfg) : cfg_(cfg) {}

  // Applies one update from the accumulated grads of every trainable
  // parameter, then leaves the grads untouched (callers zero them).
  // Throws std::runtime_error naming the parameter if any gradient entry
  // is NaN or infinite.
  void step(ParameterSet& params);

  long steps_taken() const { return step_; }
  AdamConfig& config() { return cfg_; }

 private:
  struct Moments {
    Matrix m;
    Matrix v;
  };
  AdamConfig cfg_;
  long step_ = 0;
  std::unordered_map<std::string, Moments> moments_;
};

}  // namespace ironic::nn

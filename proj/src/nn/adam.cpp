#include "ironic/nn/adam.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ironic::nn {

void Adam::step(ParameterSet& params) {
  for (const auto& p : params.all()) {
    if (!p->trainable) continue;
    if (!p->grad.allFinite()) {
      std::ostringstream os;
      os << "non-finite gradient in parameter '" << p->name << "'";
      throw std::runtime_error(os.str());
    }
  }

  Scalar scale = 1.0;
  if (cfg_.clip_norm > 0.0) {
    Scalar sq = 0.0;
    for (const auto& p : params.all())
      if (p->trainable) sq += p->grad.squaredNorm();
    const Scalar norm = std::sqrt(sq);
    if (norm > cfg_.clip_norm) scale = cfg_.clip_norm / norm;
  }

  ++step_;
  const Scalar bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<Scalar>(step_));
  const Scalar bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<Scalar>(step_));

  for (const auto& p : params.all()) {
    if (!p->trainable) continue;
    auto [it, fresh] = moments_.try_emplace(p->name);
    Moments& mo = it->second;
    if (fresh) {
      mo.m = Matrix::Zero(p->value.rows(), p->value.cols());
      mo.v = Matrix::Zero(p->value.rows(), p->value.cols());
    }
    Matrix g = p->grad * scale;
    mo.m = cfg_.beta1 * mo.m + (1.0 - cfg_.beta1) * g;
    mo.v = (cfg_.beta2 * mo.v.array() + (1.0 - cfg_.beta2) * g.array().square()).matrix();
    Matrix mhat = mo.m / bc1;
    Matrix vhat = mo.v / bc2;
    p->value.array() -= cfg_.lr * mhat.array() / (vhat.array().sqrt() + cfg_.eps);
  }
}

}  // namespace ironic::nn

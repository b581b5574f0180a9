#include "ironic/model/noise.hpp"

#include <sstream>
#include <stdexcept>

namespace ironic::model {

void validate(const NoiseSpec& spec) {
  auto bad = [](double p) { return !(p >= 0.0 && p <= 1.0); };
  if (bad(spec.p_delete) || bad(spec.p_duplicate) || bad(spec.p_swap)) {
    std::ostringstream os;
    os << "noise probabilities must lie in [0,1]: delete=" << spec.p_delete
       << " duplicate=" << spec.p_duplicate << " swap=" << spec.p_swap;
    throw std::invalid_argument(os.str());
  }
  if (spec.p_delete + spec.p_duplicate + spec.p_swap > 1.0)
    throw std::invalid_argument("noise probabilities sum above 1");
}

TokenIdSequence add_noise(const TokenIdSequence& in, const NoiseSpec& spec, Rng& rng,
                          NoiseStats* stats) {
  validate(spec);
  if (in.ids.empty()) throw std::invalid_argument("add_noise: empty sequence");

  TokenIdSequence out;
  out.style = in.style;
  const size_t n = in.ids.size();
  size_t i = 0;
  while (i < n) {
    const double u = rng.uniform();
    const bool last = (i + 1 == n);
    if (u < spec.p_delete) {
      if (stats) ++stats->deleted;
      if (last && out.ids.empty()) out.ids.push_back(in.ids[i]);  // never emit empty
      ++i;
    } else if (u < spec.p_delete + spec.p_duplicate) {
      if (stats) ++stats->duplicated;
      out.ids.push_back(in.ids[i]);
      out.ids.push_back(in.ids[i]);
      ++i;
    } else if (u < spec.p_delete + spec.p_duplicate + spec.p_swap) {
      if (stats) ++stats->swapped;
      if (last) {  // degrades to keep
        out.ids.push_back(in.ids[i]);
        ++i;
      } else {  // the partner position consumes no draw
        out.ids.push_back(in.ids[i + 1]);
        out.ids.push_back(in.ids[i]);
        i += 2;
      }
    } else {
      if (stats) ++stats->kept;
      out.ids.push_back(in.ids[i]);
      ++i;
    }
  }
  if (out.ids.size() > static_cast<size_t>(kMaxLen)) out.ids.resize(kMaxLen);
  return out;
}

TokenIdSequence add_noise(const TokenIdSequence& in, const NoiseSpec& spec) {
  Rng rng(spec.seed);
  return add_noise(in, spec, rng, nullptr);
}

}  // namespace ironic::model

#pragma once

#include <cstdint>

#include "ironic/types.hpp"
#include "ironic/util/rng.hpp"

namespace ironic::model {

// Per-token corruption used by the denoising reconstruction objective.
// For each position one event is drawn: delete, duplicate, swap-with-next,
// or keep (the remainder). A swap consumes the following position's draw.
struct NoiseSpec {
  double p_delete = 0.10;
  double p_duplicate = 0.10;
  double p_swap = 0.10;
  uint64_t seed = 0;
};

// Counts of the events actually drawn (degraded events still count as what
// was drawn, so over many tokens the split matches the probabilities).
struct NoiseStats {
  long deleted = 0;
  long duplicated = 0;
  long swapped = 0;
  long kept = 0;
  long total() const { return deleted + duplicated + swapped + kept; }
};

// Throws std::invalid_argument if any probability is negative or the three
// sum above 1.
void validate(const NoiseSpec& spec);

TokenIdSequence add_noise(const TokenIdSequence& in, const NoiseSpec& spec, Rng& rng,
                          NoiseStats* stats = nullptr);

// Convenience overload seeding a fresh stream from spec.seed.
TokenIdSequence add_noise(const TokenIdSequence& in, const NoiseSpec& spec);

}  // namespace ironic::model

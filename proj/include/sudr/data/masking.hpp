#pragma once

#include <cstdint>

#include "sudr/data/observation.hpp"

namespace sudr {

/// Marks floor(fraction * T) distinct days among t = 2..T as missing,
/// chosen uniformly with the given seed. Day 1 is never masked.
ObservationSeries mask_sparsity(const ObservationSeries& obs, double fraction, std::uint64_t seed);

}  // namespace sudr

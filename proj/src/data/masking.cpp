#include "sudr/data/masking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sudr/errors.hpp"

namespace sudr {

ObservationSeries mask_sparsity(const ObservationSeries& obs, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction < 1.0)) throw DomainError("sparsity fraction must lie in [0, 1)");
    ObservationSeries out = obs;
    const int days = obs.size();
    const int count = static_cast<int>(std::floor(fraction * days + 1e-9));
    if (count == 0 || days < 2) return out;

    std::vector<int> candidates(static_cast<std::size_t>(days - 1));
    std::iota(candidates.begin(), candidates.end(), 1);
    std::mt19937_64 rng(seed);
    // partial Fisher-Yates with an explicit uniform draw so the mask is
    // reproducible across standard libraries
    for (int i = 0; i < count; ++i) {
        const auto remaining = static_cast<std::uint64_t>(candidates.size()) - static_cast<std::uint64_t>(i);
        const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng() % remaining);
        std::swap(candidates[static_cast<std::size_t>(i)], candidates[j]);
        out.present[static_cast<std::size_t>(candidates[static_cast<std::size_t>(i)])] = false;
    }
    return out;
}

}  // namespace sudr

#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sudr/core/state.hpp"

namespace sudr {

/// Daily documented prevalence Y_1..Y_T. Index k holds day t = k + 1.
/// Masked days keep their value in `y` but are ignored by every consumer.
struct ObservationSeries {
    Eigen::VectorXd y;
    std::vector<bool> present;
    PopulationScaling scaling{};
    std::string country;
    std::vector<std::string> dates;
    /// Cumulative documented removals (recovered plus deaths) as a density,
    /// used by the SIR baselines. Empty when unknown.
    Eigen::VectorXd removed;

    static ObservationSeries from_values(const Eigen::VectorXd& values, PopulationScaling scaling = {});

    int size() const { return static_cast<int>(y.size()); }
    int observed_count() const;
    bool is_present(int k) const { return present[static_cast<std::size_t>(k)]; }

    // Throws DataError if the invariants (values in [0, 1], at least one present) fail.
    void validate() const;
};

}  // namespace sudr

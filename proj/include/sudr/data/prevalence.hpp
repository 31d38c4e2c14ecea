#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sudr/data/jhu.hpp"
#include "sudr/data/observation.hpp"

namespace sudr {

/// Active documented counts C - R - D, floored at zero.
struct ActiveSeries {
    Eigen::VectorXd counts;
    std::vector<bool> floored;  ///< true where the raw difference was negative

    bool any_floored() const;
};

ActiveSeries active_documented(const CountrySeries& cs);

/// y_t = active_t / P with P = alpha * W. Throws DataError when a value
/// exceeds 1 (alpha too small for the data).
ObservationSeries to_prevalence(const Eigen::VectorXd& active, const PopulationScaling& scaling);

/// Convenience: window, active counts and prevalence for one country.
ObservationSeries country_observations(const CountrySeries& cs, const PopulationScaling& scaling);

/// Long-format table `date,country,active,prevalence,masked`.
void write_observations(std::ostream& out, const ObservationSeries& obs);
void write_observations(const std::filesystem::path& path, const ObservationSeries& obs);

/// Reads the long-format table back. P is recovered from active/prevalence
/// on the first row with nonzero prevalence unless `scaling` is given.
ObservationSeries read_observations(const std::filesystem::path& path, const PopulationScaling* scaling = nullptr);

}  // namespace sudr

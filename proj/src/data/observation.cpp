#include "sudr/data/observation.hpp"

#include <algorithm>

#include "sudr/errors.hpp"

namespace sudr {

ObservationSeries ObservationSeries::from_values(const Eigen::VectorXd& values, PopulationScaling scaling) {
    ObservationSeries obs;
    obs.y = values;
    obs.present.assign(static_cast<std::size_t>(values.size()), true);
    obs.scaling = scaling;
    return obs;
}

int ObservationSeries::observed_count() const {
    return static_cast<int>(std::count(present.begin(), present.end(), true));
}

void ObservationSeries::validate() const {
    if (present.size() != static_cast<std::size_t>(y.size()))
        throw DataError("observation mask length does not match series length");
    if (removed.size() != 0 && removed.size() != y.size())
        throw DataError("removed series length does not match series length");
    if (observed_count() == 0) throw DataError("observation series has no present values");
    for (int k = 0; k < size(); ++k) {
        if (is_present(k) && !(y[k] >= 0.0 && y[k] <= 1.0))
            throw DataError("prevalence at day " + std::to_string(k + 1) + " outside [0,1]");
    }
}

}  // namespace sudr

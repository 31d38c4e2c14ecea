#include "sudr/data/synthetic.hpp"

#include <algorithm>
#include <random>

#include "sudr/errors.hpp"

namespace sudr {

SyntheticDataset synthesize(const ModelParams& truth, int days, const PopulationScaling& scaling,
                            std::uint64_t seed, int substeps) {
    if (!(truth.theta >= 0 && truth.gamma >= 0 && truth.sigma >= 0) || truth.contagion.coeffs.size() == 0)
        throw DomainError("synthesize: invalid truth parameters");

    // SUDR augmented with the cumulative documented removals R^D' = gamma * i_d.
    using Vec5 = Eigen::Matrix<double, 5, 1>;
    const auto field = [&truth](const Vec5& v) {
        Vec5 out;
        out.head<4>() = sudr_derivative(EpidemicState<double>::from_vector(v.head<4>()), truth).vector();
        out[4] = truth.gamma * v[2];
        return out;
    };
    Vec5 y0;
    y0 << truth.y0.vector(), 0.0;
    const Trajectory<double, 5> ext = integrate(field, y0, days, substeps);

    SyntheticDataset ds;
    ds.truth = truth;
    ds.seed = seed;
    ds.trajectory.times = ext.times;
    ds.trajectory.states = ext.states.leftCols<4>();
    ds.trajectory.substep = ext.substep;
    ds.removed_documented = ext.states.col(4).tail(days);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::VectorXd y = ds.trajectory.states.col(2).tail(days);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        const double eps = noise(rng);
        if (truth.sigma > 0) y[k] = std::clamp(y[k] + truth.sigma * eps, 0.0, 1.0);
    }
    ds.obs = ObservationSeries::from_values(y, scaling);
    ds.obs.country = "synthetic";
    ds.obs.removed = ds.removed_documented;
    for (int t = 1; t <= days; ++t) ds.obs.dates.push_back("day" + std::to_string(t));
    return ds;
}

}  // namespace sudr

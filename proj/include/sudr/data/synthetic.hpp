#pragma once

#include <cstdint>

#include "sudr/core/dynamics.hpp"
#include "sudr/core/integrator.hpp"
#include "sudr/data/observation.hpp"

namespace sudr {

/// Ground-truth dataset drawn from the SUDR mean field plus Gaussian noise.
struct SyntheticDataset {
    ModelParams truth;
    ObservationSeries obs;
    std::uint64_t seed{0};
    SudrTrajectory trajectory;      ///< noiseless states for t = 0..T
    Eigen::VectorXd removed_documented;  ///< cumulative removals out of I^D, t = 1..T
};

/// obs.y_t = i_d(t) + eps_t with eps_t ~ Normal(0, truth.sigma), clamped to
/// [0, 1]. A sigma of exactly zero yields the mean field itself.
SyntheticDataset synthesize(const ModelParams& truth, int days, const PopulationScaling& scaling,
                            std::uint64_t seed, int substeps = kDefaultSubsteps);

}  // namespace sudr

#pragma once

#include <cstdint>
#include <vector>

#include "sudr/data/observation.hpp"
#include "sudr/inference/diagnostics.hpp"
#include "sudr/inference/hmc.hpp"
#include "sudr/inference/parameters.hpp"
#include "sudr/inference/priors.hpp"

namespace sudr {

struct SudrFitConfig {
    int degree{8};
    PriorSpec prior{};
    HmcConfig hmc{default_hmc()};
    int substeps{10};
    /// Climb to a local mode from each chain's jittered start and seed the
    /// metric with the inverse negative Hessian there.
    bool start_at_mode{true};

    static HmcConfig default_hmc() {
        HmcConfig h;
        h.metric = MetricKind::dense;
        return h;
    }
};

/// Posterior draws of one SUDR fit, both unconstrained (inside `chains`)
/// and in the flat constrained layout of parameter_names().
struct SudrFit {
    ChainSet chains;
    int degree{0};
    PriorSpec prior{};
    ChainDraws constrained;
    std::vector<std::string> names;
    PosteriorSummary summary;

    /// Pooled post-warmup draws, chain-major.
    std::vector<SampledParams> pooled() const;
    SampledParams posterior_mean() const;
};

/// Starting points near a data-driven guess (initial states from the first
/// observation, unit-scale rates) jittered by U(-1, 1) in unconstrained
/// space. With a target, the best local mode of several jittered climbs is
/// located once (seeded by `seed`) and each chain starts from a draw of the
/// Laplace approximation there, with its covariance as the initial metric.
Initializer sudr_initializer(const ObservationSeries& obs, int degree, const PriorSpec& spec,
                             const LogDensity* target = nullptr, std::uint64_t seed = 1);

SudrFit fit_sudr(const ObservationSeries& obs, const SudrFitConfig& config);

/// Re-derives constrained draws and summary from raw chains.
SudrFit make_fit(ChainSet chains, int degree, const PriorSpec& spec);

}  // namespace sudr

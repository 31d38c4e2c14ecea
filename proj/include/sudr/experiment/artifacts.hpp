#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sudr/core/integrator.hpp"
#include "sudr/data/observation.hpp"
#include "sudr/inference/hmc.hpp"
#include "sudr/inference/sudr_fit.hpp"

namespace sudr {

/// Constrained posterior draws as stored in a samples CSV.
struct SampleTable {
    std::vector<std::string> names;
    int degree{0};
    ChainDraws constrained;
    std::vector<Eigen::VectorXd> log_post;
    std::vector<std::vector<bool>> divergent;

    static SampleTable from_fit(const SudrFit& fit);
    /// Chain-major pooled draws.
    std::vector<SampledParams> pooled() const;
    int total_draws() const;
};

/// Columns chain, iter, log_post, divergent, then parameter_names().
/// `iter` counts post-warmup iterations from 1.
void write_samples_csv(std::ostream& out, const SampleTable& table);
/// Throws DataError("missing_artifact") when the file is absent and
/// DataError("malformed_csv") on a bad layout.
SampleTable read_samples_csv(const std::filesystem::path& path);

/// Run settings and diagnostics with per-parameter summaries.
void write_summary_json(std::ostream& out, const SudrFit& fit, const ObservationSeries& obs, const HmcConfig& hmc);

/// Daily i_u and i_d, t = 1..T, for each of a set of draws. Draws whose
/// trajectory blows up are skipped and counted.
struct PosteriorTrajectories {
    std::vector<std::size_t> draw_index;  ///< index into the pooled draws
    Eigen::MatrixXd undocumented;         ///< rows = kept draws, cols = days
    Eigen::MatrixXd documented;
    int failures{0};
};

PosteriorTrajectories posterior_trajectories(const std::vector<SampledParams>& draws,
                                             const std::vector<std::size_t>& which, int days,
                                             int substeps = kDefaultSubsteps);

/// min(k, n) distinct indices from 0..n-1, chosen with `seed`.
std::vector<std::size_t> choose_without_replacement(std::size_t n, std::size_t k, std::uint64_t seed);

/// Long format `sample,chain,iter,day,iu,id` for the chosen draws.
void write_trajectories_csv(std::ostream& out, const PosteriorTrajectories& traj, const SampleTable& table);

/// Pointwise 2.5/50/97.5% envelopes of i_u and i_d over the given
/// trajectories: `day,observed,iu_q025,iu_median,iu_q975,id_q025,id_median,id_q975`.
/// `observed` is empty on masked days.
void write_band_csv(std::ostream& out, const PosteriorTrajectories& traj, const ObservationSeries& obs);

}  // namespace sudr

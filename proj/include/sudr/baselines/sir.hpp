#pragma once

#include <Eigen/Core>
#include <vector>

#include "sudr/core/state.hpp"
#include "sudr/data/observation.hpp"

namespace sudr {

// Discrete-time SIR baselines on documented data: I_t is the observed
// prevalence, R_t the cumulative documented removals (recovered plus deaths,
// as a density) and S_t = 1 - I_t - R_t. A masked day hides both I_t and R_t.

/// Per-day rates from the discrete balance over consecutive day pairs:
/// beta_t = -(S_{t+1} - S_t) / (S_t I_t), gamma_t = (R_{t+1} - R_t) / I_t.
/// Entry k covers days k+1 -> k+2. A pair with a masked day or a zero
/// denominator is marked missing and holds 0.
struct RateSeries {
    Eigen::VectorXd beta;
    Eigen::VectorXd gamma;
    std::vector<bool> present;

    int size() const { return static_cast<int>(beta.size()); }
    int valid_count() const;
};

struct SirRates {
    double beta{0};
    double gamma{0};
};

/// Throws InsufficientDataError without two consecutive unmasked days.
RateSeries estimate_rate_series(const ObservationSeries& obs, const Eigen::VectorXd& removed);

/// Means of the valid per-day rates. Needs at least three unmasked days and
/// one valid pair, else InsufficientDataError.
SirRates fit_constant_sir(const ObservationSeries& obs, const Eigen::VectorXd& removed);

/// Day-1 documented state (1 - I_1 - R_1, I_1, R_1).
SirState<double> documented_start(const ObservationSeries& obs, const Eigen::VectorXd& removed);

/// Steps S_{t+1} = S_t - b_t S_t I_t, I_{t+1} = I_t + b_t S_t I_t - g_t I_t,
/// R_{t+1} = R_t + g_t I_t for every supplied rate pair. Rows are (S, I, R)
/// for t = 0..H. Throws BlowupError once a density leaves [-0.1, 1.1].
Eigen::MatrixXd step_discrete_sir(const SirState<double>& y0, const Eigen::VectorXd& beta,
                                  const Eigen::VectorXd& gamma);

Eigen::MatrixXd predict_constant_sir(const SirRates& rates, const SirState<double>& y0, int horizon);

struct TimeDependentSirConfig {
    int lag{3};
    double lambda{0.03};
};

/// Rate series plus a ridge autoregression for each rate.
struct TimeDependentSir {
    RateSeries rates;
    Eigen::VectorXd beta_coeffs;
    Eigen::VectorXd gamma_coeffs;
};

TimeDependentSir fit_time_dependent_sir(const ObservationSeries& obs, const Eigen::VectorXd& removed,
                                        const TimeDependentSirConfig& config = {});

/// The first `lag` observed rates seed the path (a missing seed takes the
/// mean of the valid rates); later rates come from the autoregressions run
/// recursively on the path, floored at 0. The discrete SIR is then stepped
/// from y0 for `horizon` days.
Eigen::MatrixXd predict_time_dependent_sir(const TimeDependentSir& model, const SirState<double>& y0, int horizon);

}  // namespace sudr

#pragma once

#include <Eigen/Core>

#include "sudr/core/dynamics.hpp"
#include "sudr/core/integrator.hpp"

namespace sudr {

/// Documented density i_d(t), t = 1..T, with its exact derivatives with
/// respect to q = [xi_0..xi_N, theta, gamma, S0, I^U0, I^D0].
struct PrevalenceSensitivity {
    Eigen::VectorXd mean;
    /// days x (N + 6), row k is d i_d(k + 1) / dq.
    Eigen::MatrixXd jacobian;
    /// Undocumented density i_u(t), t = 1..T, and its derivatives.
    Eigen::VectorXd undocumented;
    Eigen::MatrixXd undocumented_jacobian;
};

/// Forward-mode differentiation of the discrete RK4 map used by
/// mean_field_prevalence, so the derivatives match that function to
/// rounding error.
PrevalenceSensitivity prevalence_sensitivity(const ModelParams& p, int days,
                                             int substeps_per_day = kDefaultSubsteps);

}  // namespace sudr

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <random>

#include "sudr/inference/gradient.hpp"
#include "sudr/inference/hmc.hpp"

namespace sudr {

struct ModeResult {
    Eigen::VectorXd position;
    double log_density{0};
    int iterations{0};
    bool converged{false};
};

/// BFGS ascent on a log density with backtracking line search. Steps that
/// land on a non-finite density are shortened. Stops when the gradient
/// infinity-norm drops below `grad_tol`.
ModeResult find_mode(const LogDensity& target, const Eigen::VectorXd& start, int max_iter = 500,
                     double grad_tol = 1e-6);

/// Symmetric finite-difference Hessian of the log density, built from
/// central differences of the gradient.
Eigen::MatrixXd numerical_hessian(const LogDensity& target, const Eigen::VectorXd& z);

/// Draws a rough starting point in unconstrained space.
using StartSampler = std::function<Eigen::VectorXd(std::mt19937_64&)>;

/// Locates the best of `restarts` local modes climbed from `rough` starts
/// (seeded by `seed`) once, then starts every chain at an independent draw
/// from the Laplace approximation there with its covariance as the initial
/// metric. Falls back to rough starts when no climb succeeds, and to the
/// mode itself when the Hessian is not negative definite.
Initializer laplace_initializer(const LogDensity& target, StartSampler rough, std::uint64_t seed, int restarts = 8);

}  // namespace sudr

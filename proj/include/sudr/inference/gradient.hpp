#pragma once

#include <Eigen/Core>
#include <functional>

namespace sudr {

using DensityFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// A log density on R^n together with its gradient.
struct LogDensity {
    DensityFn value;
    GradientFn gradient;
};

/// Central differences with per-coordinate step 1e-5 * max(1, |z_i|).
/// Throws Error("gradient_failed") if any perturbed evaluation is not finite.
Eigen::VectorXd finite_difference_gradient(const DensityFn& f, const Eigen::VectorXd& z);

LogDensity with_finite_differences(DensityFn f);

}  // namespace sudr

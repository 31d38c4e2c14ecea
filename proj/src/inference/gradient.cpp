#include "sudr/inference/gradient.hpp"

#include <cmath>
#include <string>

#include "sudr/errors.hpp"

namespace sudr {

Eigen::VectorXd finite_difference_gradient(const DensityFn& f, const Eigen::VectorXd& z) {
    Eigen::VectorXd grad(z.size());
    Eigen::VectorXd probe = z;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double step = 1e-5 * std::max(1.0, std::abs(z[i]));
        probe[i] = z[i] + step;
        const double up = f(probe);
        probe[i] = z[i] - step;
        const double down = f(probe);
        probe[i] = z[i];
        if (!std::isfinite(up) || !std::isfinite(down))
            throw Error("gradient_failed", "non-finite log density near coordinate " + std::to_string(i));
        grad[i] = (up - down) / (2 * step);
    }
    return grad;
}

LogDensity with_finite_differences(DensityFn f) {
    LogDensity target;
    target.gradient = [f](const Eigen::VectorXd& z) { return finite_difference_gradient(f, z); };
    target.value = std::move(f);
    return target;
}

}  // namespace sudr

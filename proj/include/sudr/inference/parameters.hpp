#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sudr/core/dynamics.hpp"
#include "sudr/inference/priors.hpp"

namespace sudr {

/// The coordinates the sampler actually explores. The contagion
/// coefficients are xi_i = mu_xi + delta_i (non-centered hierarchy);
/// R0 is fixed at zero.
struct SampledParams {
    double mu_xi{1.0};
    Eigen::VectorXd delta;
    double theta{0.5};
    double gamma{0.5};
    double sigma{0.01};
    double s0{0.99};
    double iu0{1e-3};
    double id0{1e-4};

    int degree() const { return static_cast<int>(delta.size()) - 1; }
    Eigen::VectorXd xi() const { return delta.array() + mu_xi; }
    ModelParams model() const;
};

/// Dimension of the unconstrained vector for Bernstein degree N: N + 8.
inline int unconstrained_dimension(int degree) { return degree + 8; }

/// Layout [w, log xi_0..log xi_N, theta, gamma, sigma, S0, I^U0, I^D0].
/// The hierarchy is sampled through the identified sums xi_i and the share
/// w = logit(mu_xi / min_i xi_i), which maps one-to-one onto mu_xi > 0,
/// delta_i > 0. Rates and sigma use z = log(value - lower) where lower is
/// the bottom of the prior support. The initial densities live in (lower, 1)
/// and use z = logit((value - lower) / (1 - lower)).
Eigen::VectorXd to_unconstrained(const SampledParams& p, const PriorSpec& spec);
SampledParams from_unconstrained(const Eigen::VectorXd& z, const PriorSpec& spec);

/// log |d constrained / d z| of the map above.
double log_jacobian(const Eigen::VectorXd& z, const PriorSpec& spec);

/// The hierarchy block alone: [w, log xi_0..log xi_N] from mu_xi and delta,
/// its inverse, and its log-Jacobian. Shared with the complex-SIR baseline.
Eigen::VectorXd hierarchy_to_unconstrained(double mu_xi, const Eigen::VectorXd& delta);
void hierarchy_from_unconstrained(const Eigen::Ref<const Eigen::VectorXd>& coords, double& mu_xi,
                                  Eigen::VectorXd& delta);
double hierarchy_log_jacobian(const Eigen::Ref<const Eigen::VectorXd>& coords);

/// Flat constrained view used by samples CSVs and summaries:
/// mu_xi, delta_*, xi_*, theta, gamma, sigma, s0, iu0, id0.
std::vector<std::string> parameter_names(int degree);
Eigen::VectorXd flatten(const SampledParams& p);
SampledParams unflatten(const Eigen::VectorXd& v, int degree);

}  // namespace sudr

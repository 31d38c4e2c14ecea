#pragma once

#include <Eigen/Core>

#include "sudr/core/integrator.hpp"
#include "sudr/data/observation.hpp"
#include "sudr/inference/gradient.hpp"
#include "sudr/inference/parameters.hpp"
#include "sudr/inference/priors.hpp"

namespace sudr {

/// Gaussian log likelihood of the present observations around the
/// mean-field documented prevalence. Returns -inf (never throws) when the
/// trajectory blows up.
double log_likelihood(const ObservationSeries& obs, const ModelParams& p, int substeps = kDefaultSubsteps);

/// Per-term breakdown of the log prior. `sigma_sq` is the Half-Cauchy
/// density of the variance and `sigma_jacobian` = log(2 sigma) converts it
/// to a density over sigma. `support` is 0, or -inf when an initial
/// density exceeds 1.
struct PriorTerms {
    double sigma_sq{0};
    double sigma_jacobian{0};
    double mu_xi{0};
    double delta{0};
    double theta{0};
    double gamma{0};
    double s0{0};
    double iu0{0};
    double id0{0};
    double support{0};

    double total() const {
        return sigma_sq + sigma_jacobian + mu_xi + delta + theta + gamma + s0 + iu0 + id0 + support;
    }
};

PriorTerms prior_terms(const SampledParams& p, const PriorSpec& spec);

inline double log_prior(const SampledParams& p, const PriorSpec& spec) { return prior_terms(p, spec).total(); }

/// log likelihood + log prior + log Jacobian of the unconstraining map,
/// up to the evidence constant.
double log_posterior(const Eigen::VectorXd& z, const ObservationSeries& obs, const PriorSpec& spec,
                     int substeps = kDefaultSubsteps);

/// Gradient of log_posterior. The likelihood part is differentiated exactly
/// through the integrator; prior and Jacobian use central differences.
Eigen::VectorXd grad_log_posterior(const Eigen::VectorXd& z, const ObservationSeries& obs, const PriorSpec& spec,
                                   int substeps = kDefaultSubsteps);

/// Binds observations and priors into a target the sampler can consume.
LogDensity sudr_target(const ObservationSeries& obs, const PriorSpec& spec, int substeps = kDefaultSubsteps);

}  // namespace sudr

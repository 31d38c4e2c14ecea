#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sudr/core/integrator.hpp"
#include "sudr/core/state.hpp"
#include "sudr/data/observation.hpp"
#include "sudr/inference/diagnostics.hpp"
#include "sudr/inference/hmc.hpp"
#include "sudr/inference/priors.hpp"

namespace sudr {

/// SIR with the density-dependent contagion B_N(i; xi), fitted by HMC on the
/// documented prevalence. The state starts from the day-1 documented values
/// and is not sampled. Priors reuse the SUDR hyperparameters a, b, c, e and
/// mu_gamma.
struct ComplexSirParams {
    double mu_xi{1.0};
    Eigen::VectorXd delta;
    double gamma{0.5};
    double sigma{0.01};

    int degree() const { return static_cast<int>(delta.size()) - 1; }
    Eigen::VectorXd xi() const { return delta.array() + mu_xi; }
    ContagionFunction contagion() const;
};

/// Layout [w, log xi_0..log xi_N, log(gamma - mu_gamma), log sigma].
inline int complex_sir_dimension(int degree) { return degree + 4; }

Eigen::VectorXd complex_sir_to_unconstrained(const ComplexSirParams& p, const PriorSpec& spec);
ComplexSirParams complex_sir_from_unconstrained(const Eigen::VectorXd& z, const PriorSpec& spec);

/// mu_xi, delta_*, xi_*, gamma, sigma.
std::vector<std::string> complex_sir_names(int degree);

double complex_sir_log_posterior(const Eigen::VectorXd& z, const ObservationSeries& obs, const SirState<double>& y0,
                                 const PriorSpec& spec, int substeps = kDefaultSubsteps);

/// Likelihood part exact through the integrator, prior and Jacobian by
/// central differences.
Eigen::VectorXd complex_sir_grad_log_posterior(const Eigen::VectorXd& z, const ObservationSeries& obs,
                                               const SirState<double>& y0, const PriorSpec& spec,
                                               int substeps = kDefaultSubsteps);

LogDensity complex_sir_target(const ObservationSeries& obs, const SirState<double>& y0, const PriorSpec& spec,
                              int substeps = kDefaultSubsteps);

/// Infectious density i(t) for t = 0..horizon from the day-1 state y0.
Eigen::VectorXd predict_complex_sir(const ComplexSirParams& p, const SirState<double>& y0, int horizon,
                                    int substeps = kDefaultSubsteps);

struct ComplexSirConfig {
    int degree{8};
    PriorSpec prior{};
    HmcConfig hmc{default_hmc()};
    int substeps{kDefaultSubsteps};

    static HmcConfig default_hmc() {
        HmcConfig h;
        h.metric = MetricKind::dense;
        return h;
    }
};

struct ComplexSirFit {
    ChainSet chains;
    int degree{0};
    SirState<double> y0{};
    ChainDraws constrained;
    std::vector<std::string> names;
    PosteriorSummary summary;

    ComplexSirParams posterior_mean() const;
};

/// `removed` supplies R_1 for the fixed initial state.
ComplexSirFit fit_complex_sir(const ObservationSeries& obs, const Eigen::VectorXd& removed,
                              const ComplexSirConfig& config = {});

}  // namespace sudr

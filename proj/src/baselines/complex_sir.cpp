#include "sudr/baselines/complex_sir.hpp"

#include <algorithm>
#include <cmath>

#include "sudr/baselines/sir.hpp"
#include "sudr/core/sensitivity.hpp"
#include "sudr/errors.hpp"
#include "sudr/inference/optimize.hpp"
#include "sudr/inference/parameters.hpp"

namespace sudr {

namespace {

constexpr int kModeRestarts = 8;

double log_prior_and_jacobian(const Eigen::VectorXd& z, const PriorSpec& spec) {
    const Eigen::Index n = z.size() - 4;
    const ComplexSirParams p = complex_sir_from_unconstrained(z, spec);
    double lp = half_cauchy_lpdf(p.sigma * p.sigma, 0.0, spec.a) + std::log(2.0 * p.sigma);
    lp += half_normal_lpdf(p.mu_xi, 0.0, spec.b);
    for (Eigen::Index i = 0; i < p.delta.size(); ++i) lp += half_normal_lpdf(p.delta[i], 0.0, spec.c);
    lp += half_cauchy_lpdf(p.gamma, spec.mu_gamma, spec.e);
    return lp + hierarchy_log_jacobian(z.head(n + 2)) + z[n + 2] + z[n + 3];
}

// Complex SIR is SUDR with theta = 0 read off the undocumented compartment,
// which gives the exact tangent of the same RK4 map.
ModelParams as_sudr(const ComplexSirParams& p, const SirState<double>& y0) {
    ModelParams m;
    m.contagion = p.contagion();
    m.theta = 0.0;
    m.gamma = p.gamma;
    m.sigma = p.sigma;
    m.y0 = {y0.s, y0.i, 0.0, y0.r};
    return m;
}

}  // namespace

ContagionFunction ComplexSirParams::contagion() const {
    ContagionFunction f;
    f.coeffs = xi();
    return f;
}

Eigen::VectorXd complex_sir_to_unconstrained(const ComplexSirParams& p, const PriorSpec& spec) {
    const int n = p.degree();
    if (n < 0) throw DomainError("complex SIR parameters have no delta coordinates");
    if (!(p.gamma > spec.mu_gamma) || !(p.sigma > 0)) throw DomainError("parameter at or below its support boundary");
    Eigen::VectorXd z(complex_sir_dimension(n));
    z.head(n + 2) = hierarchy_to_unconstrained(p.mu_xi, p.delta);
    z[n + 2] = std::log(p.gamma - spec.mu_gamma);
    z[n + 3] = std::log(p.sigma);
    return z;
}

ComplexSirParams complex_sir_from_unconstrained(const Eigen::VectorXd& z, const PriorSpec& spec) {
    const Eigen::Index n = z.size() - 4;
    if (n < 0) throw DomainError("unconstrained vector too short");
    ComplexSirParams p;
    hierarchy_from_unconstrained(z.head(n + 2), p.mu_xi, p.delta);
    p.gamma = spec.mu_gamma + std::exp(z[n + 2]);
    p.sigma = std::exp(z[n + 3]);
    return p;
}

std::vector<std::string> complex_sir_names(int degree) {
    std::vector<std::string> names{"mu_xi"};
    for (int i = 0; i <= degree; ++i) names.push_back("delta_" + std::to_string(i));
    for (int i = 0; i <= degree; ++i) names.push_back("xi_" + std::to_string(i));
    names.emplace_back("gamma");
    names.emplace_back("sigma");
    return names;
}

Eigen::VectorXd predict_complex_sir(const ComplexSirParams& p, const SirState<double>& y0, int horizon,
                                    int substeps) {
    if (horizon < 0) throw DomainError("horizon must be >= 0");
    if (horizon == 0) return Eigen::VectorXd::Constant(1, y0.i);
    return integrate_complex_sir(p.contagion(), p.gamma, y0, horizon, substeps).states.col(1);
}

double complex_sir_log_posterior(const Eigen::VectorXd& z, const ObservationSeries& obs, const SirState<double>& y0,
                                 const PriorSpec& spec, int substeps) {
    if (!z.allFinite()) return kNegInf;
    const ComplexSirParams p = complex_sir_from_unconstrained(z, spec);
    double lp = log_prior_and_jacobian(z, spec);
    if (!std::isfinite(lp)) return kNegInf;

    Eigen::VectorXd mean;
    try {
        mean = predict_complex_sir(p, y0, obs.size() - 1, substeps);
    } catch (const BlowupError&) {
        return kNegInf;
    }
    for (int k = 0; k < obs.size(); ++k)
        if (obs.is_present(k)) lp += normal_lpdf(obs.y[k], mean[k], p.sigma);
    return std::isfinite(lp) ? lp : kNegInf;
}

Eigen::VectorXd complex_sir_grad_log_posterior(const Eigen::VectorXd& z, const ObservationSeries& obs,
                                               const SirState<double>& y0, const PriorSpec& spec, int substeps) {
    const ComplexSirParams p = complex_sir_from_unconstrained(z, spec);
    const int n = p.degree();
    Eigen::VectorXd grad =
        finite_difference_gradient([&spec](const Eigen::VectorXd& x) { return log_prior_and_jacobian(x, spec); }, z);

    const double var = p.sigma * p.sigma;
    double dsigma = 0.0;
    Eigen::VectorXd dmean = Eigen::VectorXd::Zero(obs.size());
    PrevalenceSensitivity sens;
    if (obs.size() > 1) {
        try {
            sens = prevalence_sensitivity(as_sudr(p, y0), obs.size() - 1, substeps);
        } catch (const BlowupError& e) {
            throw Error("gradient_failed", e.what());
        }
    }
    for (int k = 0; k < obs.size(); ++k) {
        if (!obs.is_present(k)) continue;
        const double r = obs.y[k] - (k == 0 ? y0.i : sens.undocumented[k - 1]);
        dmean[k] = r / var;
        dsigma += (r * r / var - 1.0) / p.sigma;
    }
    if (obs.size() > 1) {
        const Eigen::VectorXd dq = sens.undocumented_jacobian.transpose() * dmean.tail(obs.size() - 1);
        const Eigen::VectorXd xi = p.xi();
        for (int i = 0; i <= n; ++i) grad[1 + i] += dq[i] * xi[i];
        grad[n + 2] += dq[n + 2] * (p.gamma - spec.mu_gamma);
    }
    grad[n + 3] += dsigma * p.sigma;
    if (!grad.allFinite()) throw Error("gradient_failed", "non-finite complex SIR gradient");
    return grad;
}

LogDensity complex_sir_target(const ObservationSeries& obs, const SirState<double>& y0, const PriorSpec& spec,
                              int substeps) {
    LogDensity target;
    target.value = [obs, y0, spec, substeps](const Eigen::VectorXd& z) {
        return complex_sir_log_posterior(z, obs, y0, spec, substeps);
    };
    target.gradient = [obs, y0, spec, substeps](const Eigen::VectorXd& z) {
        return complex_sir_grad_log_posterior(z, obs, y0, spec, substeps);
    };
    return target;
}

ComplexSirParams ComplexSirFit::posterior_mean() const {
    ComplexSirParams p;
    p.mu_xi = summary.params[0].mean;
    p.delta.resize(degree + 1);
    for (int i = 0; i <= degree; ++i) p.delta[i] = summary.params[static_cast<std::size_t>(1 + i)].mean;
    p.gamma = summary.at("gamma").mean;
    p.sigma = summary.at("sigma").mean;
    return p;
}

ComplexSirFit fit_complex_sir(const ObservationSeries& obs, const Eigen::VectorXd& removed,
                              const ComplexSirConfig& config) {
    obs.validate();
    if (config.degree < 0) throw ConfigError("Bernstein degree must be >= 0");
    if (!config.prior.valid()) throw ConfigError("prior scales must be positive");

    ComplexSirFit fit;
    fit.degree = config.degree;
    fit.y0 = documented_start(obs, removed);
    fit.names = complex_sir_names(config.degree);

    // Start near the discrete rate estimates when they exist.
    ComplexSirParams guess;
    guess.mu_xi = 0.5;
    guess.delta = Eigen::VectorXd::Constant(config.degree + 1, 0.5);
    guess.gamma = config.prior.mu_gamma + 0.5;
    try {
        const SirRates rates = fit_constant_sir(obs, removed);
        if (rates.beta > 0) {
            guess.mu_xi = 0.5 * rates.beta;
            guess.delta.setConstant(0.5 * rates.beta);
        }
        if (rates.gamma > 0) guess.gamma = config.prior.mu_gamma + rates.gamma;
    } catch (const Error&) {
    }
    guess.sigma = std::max(0.05 * obs.y.maxCoeff(), 1e-6);
    const Eigen::VectorXd centre = complex_sir_to_unconstrained(guess, config.prior);

    const LogDensity target = complex_sir_target(obs, fit.y0, config.prior, config.substeps);
    StartSampler jittered = [centre](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::VectorXd z = centre;
        for (Eigen::Index i = 0; i < z.size(); ++i) z[i] += u(rng);
        return z;
    };
    fit.chains = hmc_sample(target, complex_sir_dimension(config.degree), config.hmc,
                            laplace_initializer(target, std::move(jittered), config.hmc.seed, kModeRestarts));

    const Eigen::Index width = static_cast<Eigen::Index>(fit.names.size());
    for (const auto& c : fit.chains.chains) {
        Eigen::MatrixXd m(c.draws.rows(), width);
        for (Eigen::Index i = 0; i < c.draws.rows(); ++i) {
            const ComplexSirParams p = complex_sir_from_unconstrained(c.draws.row(i).transpose(), config.prior);
            m.row(i) << p.mu_xi, p.delta.transpose(), p.xi().transpose(), p.gamma, p.sigma;
        }
        fit.constrained.push_back(std::move(m));
    }
    fit.summary = summarize(fit.constrained, fit.names);
    return fit;
}

}  // namespace sudr

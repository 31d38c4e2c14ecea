#include "sudr/inference/posterior.hpp"

#include <cmath>

#include "sudr/core/sensitivity.hpp"

namespace sudr {

double log_likelihood(const ObservationSeries& obs, const ModelParams& p, int substeps) {
    if (obs.observed_count() == 0) return 0.0;
    Eigen::VectorXd mean;
    try {
        mean = mean_field_prevalence(p, obs.size(), substeps);
    } catch (const BlowupError&) {
        return kNegInf;
    }
    double total = 0.0;
    for (int k = 0; k < obs.size(); ++k) {
        if (obs.is_present(k)) total += normal_lpdf(obs.y[k], mean[k], p.sigma);
    }
    return std::isnan(total) ? kNegInf : total;
}

PriorTerms prior_terms(const SampledParams& p, const PriorSpec& spec) {
    PriorTerms t;
    t.sigma_sq = half_cauchy_lpdf(p.sigma * p.sigma, 0.0, spec.a);
    t.sigma_jacobian = std::log(2.0 * p.sigma);
    t.mu_xi = half_normal_lpdf(p.mu_xi, 0.0, spec.b);
    for (Eigen::Index i = 0; i < p.delta.size(); ++i) t.delta += half_normal_lpdf(p.delta[i], 0.0, spec.c);
    t.theta = half_cauchy_lpdf(p.theta, spec.mu_theta, spec.d);
    t.gamma = half_cauchy_lpdf(p.gamma, spec.mu_gamma, spec.e);
    t.s0 = half_normal_lpdf(p.s0, spec.mu_s0, spec.f);
    t.iu0 = half_normal_lpdf(p.iu0, spec.mu_iu0, spec.g);
    t.id0 = half_normal_lpdf(p.id0, spec.mu_id0, spec.h);
    if (!(p.s0 <= 1.0 && p.iu0 <= 1.0 && p.id0 <= 1.0)) t.support = kNegInf;
    return t;
}

double log_posterior(const Eigen::VectorXd& z, const ObservationSeries& obs, const PriorSpec& spec, int substeps) {
    if (!z.allFinite()) return kNegInf;
    const SampledParams p = from_unconstrained(z, spec);
    const double prior = log_prior(p, spec);
    if (!std::isfinite(prior)) return kNegInf;
    const double lik = log_likelihood(obs, p.model(), substeps);
    if (!std::isfinite(lik)) return kNegInf;
    return lik + prior + log_jacobian(z, spec);
}

Eigen::VectorXd grad_log_posterior(const Eigen::VectorXd& z, const ObservationSeries& obs, const PriorSpec& spec,
                                   int substeps) {
    const SampledParams p = from_unconstrained(z, spec);
    const int n = p.degree();

    // Prior and Jacobian are cheap, so central differences suffice there.
    Eigen::VectorXd grad = finite_difference_gradient(
        [&spec](const Eigen::VectorXd& x) { return log_prior(from_unconstrained(x, spec), spec) + log_jacobian(x, spec); },
        z);
    if (obs.observed_count() == 0) return grad;

    PrevalenceSensitivity sens;
    try {
        sens = prevalence_sensitivity(p.model(), obs.size(), substeps);
    } catch (const BlowupError& e) {
        throw Error("gradient_failed", e.what());
    }
    const double var = p.sigma * p.sigma;
    Eigen::VectorXd dmean = Eigen::VectorXd::Zero(obs.size());
    double dsigma = 0.0;
    for (int k = 0; k < obs.size(); ++k) {
        if (!obs.is_present(k)) continue;
        const double r = obs.y[k] - sens.mean[k];
        dmean[k] = r / var;
        dsigma += (r * r / var - 1.0) / p.sigma;
    }
    const Eigen::VectorXd dq = sens.jacobian.transpose() * dmean;
    if (!dq.allFinite() || !std::isfinite(dsigma)) throw Error("gradient_failed", "non-finite likelihood gradient");

    // Chain rule through log xi_i and the shifted log / logit maps. The
    // hierarchy share does not enter the likelihood.
    const Eigen::VectorXd xi = p.xi();
    for (int i = 0; i <= n; ++i) grad[1 + i] += dq[i] * xi[i];
    grad[n + 2] += dq[n + 1] * (p.theta - spec.mu_theta);
    grad[n + 3] += dq[n + 2] * (p.gamma - spec.mu_gamma);
    grad[n + 4] += dsigma * p.sigma;
    const double values[3] = {p.s0, p.iu0, p.id0};
    const double lower[3] = {spec.mu_s0, spec.mu_iu0, spec.mu_id0};
    for (int j = 0; j < 3; ++j)
        grad[n + 5 + j] += dq[n + 3 + j] * (values[j] - lower[j]) * (1.0 - values[j]) / (1.0 - lower[j]);
    return grad;
}

LogDensity sudr_target(const ObservationSeries& obs, const PriorSpec& spec, int substeps) {
    LogDensity target;
    target.value = [obs, spec, substeps](const Eigen::VectorXd& z) { return log_posterior(z, obs, spec, substeps); };
    target.gradient = [obs, spec, substeps](const Eigen::VectorXd& z) {
        return grad_log_posterior(z, obs, spec, substeps);
    };
    return target;
}

}  // namespace sudr

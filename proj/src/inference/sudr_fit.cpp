#include "sudr/inference/sudr_fit.hpp"

#include <algorithm>
#include <cmath>

#include "sudr/errors.hpp"
#include "sudr/inference/optimize.hpp"
#include "sudr/inference/posterior.hpp"

namespace sudr {

namespace {
constexpr int kModeRestarts = 8;
}  // namespace

std::vector<SampledParams> SudrFit::pooled() const {
    std::vector<SampledParams> out;
    for (const auto& c : constrained)
        for (Eigen::Index i = 0; i < c.rows(); ++i) out.push_back(unflatten(c.row(i).transpose(), degree));
    return out;
}

SampledParams SudrFit::posterior_mean() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) v[static_cast<Eigen::Index>(j)] = summary.params[j].mean;
    return unflatten(v, degree);
}

Initializer sudr_initializer(const ObservationSeries& obs, int degree, const PriorSpec& spec, const LogDensity* target,
                             std::uint64_t seed) {
    double first = 0.0;
    double spread = 0.0;
    for (int k = 0; k < obs.size(); ++k) {
        if (!obs.is_present(k)) continue;
        if (first == 0.0) first = obs.y[k];
        spread = std::max(spread, obs.y[k]);
    }
    SampledParams guess;
    guess.mu_xi = 1.0;
    guess.delta = Eigen::VectorXd::Constant(degree + 1, 1.0);
    guess.theta = spec.mu_theta + 0.5;
    guess.gamma = spec.mu_gamma + 0.5;
    guess.sigma = std::max(0.05 * spread, 1e-6);
    guess.id0 = spec.mu_id0 + std::max(first, 1e-6);
    guess.iu0 = spec.mu_iu0 + std::max(first, 1e-6);
    guess.s0 = 0.5 * (1.0 + spec.mu_s0);
    const Eigen::VectorXd centre = to_unconstrained(guess, spec);
    StartSampler jittered = [centre](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::VectorXd z = centre;
        for (Eigen::Index i = 0; i < z.size(); ++i) z[i] += u(rng);
        return z;
    };
    if (target != nullptr) return laplace_initializer(*target, std::move(jittered), seed, kModeRestarts);
    return [jittered](std::mt19937_64& rng) {
        ChainStart start;
        start.position = jittered(rng);
        return start;
    };
}

SudrFit make_fit(ChainSet chains, int degree, const PriorSpec& spec) {
    SudrFit fit;
    fit.degree = degree;
    fit.prior = spec;
    fit.names = parameter_names(degree);
    for (const auto& c : chains.chains) {
        Eigen::MatrixXd m(c.draws.rows(), static_cast<Eigen::Index>(fit.names.size()));
        for (Eigen::Index i = 0; i < c.draws.rows(); ++i)
            m.row(i) = flatten(from_unconstrained(c.draws.row(i).transpose(), spec)).transpose();
        fit.constrained.push_back(std::move(m));
    }
    fit.chains = std::move(chains);
    fit.summary = summarize(fit.constrained, fit.names);
    return fit;
}

SudrFit fit_sudr(const ObservationSeries& obs, const SudrFitConfig& config) {
    obs.validate();
    if (config.degree < 0) throw ConfigError("Bernstein degree must be >= 0");
    if (!config.prior.valid()) throw ConfigError("prior scales must be positive");
    const LogDensity target = sudr_target(obs, config.prior, config.substeps);
    ChainSet chains = hmc_sample(target, unconstrained_dimension(config.degree), config.hmc,
                                 sudr_initializer(obs, config.degree, config.prior,
                                                  config.start_at_mode ? &target : nullptr, config.hmc.seed));
    return make_fit(std::move(chains), config.degree, config.prior);
}

}  // namespace sudr

#include "sudr/baselines/sir.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sudr/baselines/ridge.hpp"
#include "sudr/errors.hpp"

namespace sudr {

namespace {

void check_removed(const ObservationSeries& obs, const Eigen::VectorXd& removed) {
    if (removed.size() != obs.size())
        throw DomainError("removed series has " + std::to_string(removed.size()) + " days, observations have " +
                          std::to_string(obs.size()));
}

double mean_of_valid(const Eigen::VectorXd& v, const std::vector<bool>& present) {
    double sum = 0.0;
    int n = 0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (!present[static_cast<std::size_t>(k)]) continue;
        sum += v[k];
        ++n;
    }
    return n == 0 ? 0.0 : sum / n;
}

}  // namespace

int RateSeries::valid_count() const { return static_cast<int>(std::count(present.begin(), present.end(), true)); }

RateSeries estimate_rate_series(const ObservationSeries& obs, const Eigen::VectorXd& removed) {
    check_removed(obs, removed);
    bool any_pair = false;
    for (int k = 0; k + 1 < obs.size() && !any_pair; ++k) any_pair = obs.is_present(k) && obs.is_present(k + 1);
    if (!any_pair) throw InsufficientDataError("rate estimation needs two consecutive unmasked days");

    const int n = obs.size() - 1;
    RateSeries rs;
    rs.beta = Eigen::VectorXd::Zero(n);
    rs.gamma = Eigen::VectorXd::Zero(n);
    rs.present.assign(static_cast<std::size_t>(n), false);
    for (int k = 0; k < n; ++k) {
        if (!obs.is_present(k) || !obs.is_present(k + 1)) continue;
        const double i0 = obs.y[k];
        const double s0 = 1.0 - i0 - removed[k];
        const double s1 = 1.0 - obs.y[k + 1] - removed[k + 1];
        if (i0 == 0.0 || s0 == 0.0) continue;
        rs.beta[k] = -(s1 - s0) / (s0 * i0);
        rs.gamma[k] = (removed[k + 1] - removed[k]) / i0;
        if (!std::isfinite(rs.beta[k]) || !std::isfinite(rs.gamma[k])) {
            rs.beta[k] = rs.gamma[k] = 0.0;
            continue;
        }
        rs.present[static_cast<std::size_t>(k)] = true;
    }
    return rs;
}

SirRates fit_constant_sir(const ObservationSeries& obs, const Eigen::VectorXd& removed) {
    if (obs.observed_count() < 3)
        throw InsufficientDataError("constant SIR needs at least 3 unmasked days, got " +
                                    std::to_string(obs.observed_count()));
    const RateSeries rs = estimate_rate_series(obs, removed);
    if (rs.valid_count() == 0) throw InsufficientDataError("no day pair with a nonzero denominator");
    return {mean_of_valid(rs.beta, rs.present), mean_of_valid(rs.gamma, rs.present)};
}

SirState<double> documented_start(const ObservationSeries& obs, const Eigen::VectorXd& removed) {
    check_removed(obs, removed);
    if (obs.size() == 0) throw InsufficientDataError("empty observation series");
    return {1.0 - obs.y[0] - removed[0], obs.y[0], removed[0]};
}

Eigen::MatrixXd step_discrete_sir(const SirState<double>& y0, const Eigen::VectorXd& beta,
                                  const Eigen::VectorXd& gamma) {
    if (beta.size() != gamma.size()) throw DomainError("beta and gamma paths differ in length");
    const Eigen::Index horizon = beta.size();
    Eigen::MatrixXd out(horizon + 1, 3);
    out.row(0) << y0.s, y0.i, y0.r;
    for (Eigen::Index t = 0; t < horizon; ++t) {
        const double s = out(t, 0), i = out(t, 1), r = out(t, 2);
        const double infection = beta[t] * s * i;
        const double removal = gamma[t] * i;
        out.row(t + 1) << s - infection, i + infection - removal, r + removal;
        for (int c = 0; c < 3; ++c) {
            const double v = out(t + 1, c);
            if (!std::isfinite(v) || v < -0.1 || v > 1.1)
                throw BlowupError("discrete SIR density left [-0.1, 1.1] at step " + std::to_string(t + 1));
        }
    }
    return out;
}

Eigen::MatrixXd predict_constant_sir(const SirRates& rates, const SirState<double>& y0, int horizon) {
    if (horizon < 0) throw DomainError("horizon must be >= 0");
    return step_discrete_sir(y0, Eigen::VectorXd::Constant(horizon, rates.beta),
                             Eigen::VectorXd::Constant(horizon, rates.gamma));
}

TimeDependentSir fit_time_dependent_sir(const ObservationSeries& obs, const Eigen::VectorXd& removed,
                                        const TimeDependentSirConfig& config) {
    TimeDependentSir model;
    model.rates = estimate_rate_series(obs, removed);
    model.beta_coeffs = ridge_fit(model.rates.beta, model.rates.present, config.lag, config.lambda);
    model.gamma_coeffs = ridge_fit(model.rates.gamma, model.rates.present, config.lag, config.lambda);
    return model;
}

Eigen::MatrixXd predict_time_dependent_sir(const TimeDependentSir& model, const SirState<double>& y0, int horizon) {
    if (horizon < 0) throw DomainError("horizon must be >= 0");
    if (model.rates.size() == 0 || model.rates.valid_count() == 0) throw InsufficientDataError("empty rate series");
    const int lag = static_cast<int>(model.beta_coeffs.size()) - 1;

    const auto path = [&](const Eigen::VectorXd& observed, const Eigen::VectorXd& coeffs) {
        const double fallback = mean_of_valid(observed, model.rates.present);
        std::vector<double> history;
        Eigen::VectorXd out(horizon);
        for (int t = 0; t < horizon; ++t) {
            double v = 0.0;
            if (t < lag) {
                const bool seen = t < model.rates.size() && model.rates.present[static_cast<std::size_t>(t)];
                v = seen ? observed[t] : fallback;
            } else {
                v = ridge_predict(coeffs, history);
            }
            v = std::max(v, 0.0);
            history.push_back(v);
            out[t] = v;
        }
        return out;
    };
    return step_discrete_sir(y0, path(model.rates.beta, model.beta_coeffs), path(model.rates.gamma, model.gamma_coeffs));
}

}  // namespace sudr

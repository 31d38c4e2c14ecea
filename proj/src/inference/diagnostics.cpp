#include "sudr/inference/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sudr/errors.hpp"

namespace sudr {

namespace {

void check_shape(const ChainDraws& chains, int param, int min_chains, int min_draws) {
    if (static_cast<int>(chains.size()) < min_chains)
        throw DomainError("diagnostic needs at least " + std::to_string(min_chains) + " chains");
    for (const auto& c : chains) {
        if (c.rows() < min_draws) throw DomainError("diagnostic needs at least " + std::to_string(min_draws) + " draws per chain");
        if (c.rows() != chains.front().rows()) throw DomainError("chains have different lengths");
        if (param < 0 || param >= c.cols()) throw DomainError("parameter index out of range");
    }
}

double variance(const Eigen::VectorXd& x) {
    const double m = x.mean();
    return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

}  // namespace

double r_hat(const ChainDraws& chains, int param) {
    check_shape(chains, param, 2, 4);
    const Eigen::Index half = chains.front().rows() / 2;
    std::vector<Eigen::VectorXd> split;
    for (const auto& c : chains) {
        const Eigen::VectorXd col = c.col(param);
        split.emplace_back(col.head(half));
        split.emplace_back(col.tail(half));
    }
    const double n = static_cast<double>(half);
    const double m = static_cast<double>(split.size());
    Eigen::VectorXd means(split.size());
    double w = 0.0;
    for (std::size_t j = 0; j < split.size(); ++j) {
        means[static_cast<Eigen::Index>(j)] = split[j].mean();
        w += variance(split[j]);
    }
    w /= m;
    const double b = n * variance(means);
    if (w <= 0.0) return b <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    const double var_plus = (n - 1.0) / n * w + b / n;
    return std::sqrt(var_plus / w);
}

double ess(const ChainDraws& chains, int param) {
    check_shape(chains, param, 1, 4);
    const Eigen::Index n = chains.front().rows();
    const double m = static_cast<double>(chains.size());
    const double total = m * static_cast<double>(n);

    std::vector<Eigen::VectorXd> centered;
    Eigen::VectorXd means(chains.size());
    double w = 0.0;
    for (std::size_t j = 0; j < chains.size(); ++j) {
        const Eigen::VectorXd col = chains[j].col(param);
        means[static_cast<Eigen::Index>(j)] = col.mean();
        centered.emplace_back(col.array() - col.mean());
        w += variance(col);
    }
    w /= m;
    const double b_over_n = chains.size() > 1 ? variance(means) : 0.0;
    const double var_plus = (n - 1.0) / n * w + b_over_n;
    if (!(w > 0.0) || !(var_plus > 0.0)) return total;

    // mean over chains of the biased autocovariance at a given lag
    const auto autocov = [&](Eigen::Index lag) {
        double acc = 0.0;
        for (const auto& c : centered) acc += c.head(n - lag).dot(c.tail(n - lag)) / static_cast<double>(n);
        return acc / m;
    };
    const auto rho = [&](Eigen::Index lag) { return 1.0 - (w * (n - 1.0) / n - autocov(lag)) / var_plus; };

    double tau = -1.0;
    for (Eigen::Index t = 0; t + 1 < n; t += 2) {
        const double pair = rho(t) + rho(t + 1);
        if (pair < 0.0) break;
        tau += 2.0 * pair;
    }
    tau = std::max(tau, 1.0 / std::log10(total));
    return total / tau;
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw DomainError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

const ParameterSummary& PosteriorSummary::at(const std::string& name) const {
    for (const auto& p : params)
        if (p.name == name) return p;
    throw DomainError("no summary for parameter " + name);
}

double PosteriorSummary::max_r_hat() const {
    double r = 0.0;
    for (const auto& p : params) r = std::max(r, p.r_hat);
    return r;
}

double PosteriorSummary::min_ess() const {
    double e = std::numeric_limits<double>::infinity();
    for (const auto& p : params) e = std::min(e, p.ess);
    return e;
}

bool PosteriorSummary::converged() const { return max_r_hat() < 1.05 && min_ess() > 100.0; }

PosteriorSummary summarize(const ChainDraws& chains, const std::vector<std::string>& names) {
    if (chains.empty() || chains.front().rows() == 0) throw DomainError("summarize needs at least one draw");
    const auto cols = chains.front().cols();
    if (static_cast<Eigen::Index>(names.size()) != cols) throw DomainError("parameter names do not match draw columns");
    const bool diagnose = chains.size() >= 2 && chains.front().rows() >= 4;

    PosteriorSummary out;
    for (Eigen::Index j = 0; j < cols; ++j) {
        std::vector<double> pooled;
        for (const auto& c : chains)
            for (Eigen::Index i = 0; i < c.rows(); ++i) pooled.push_back(c(i, j));
        ParameterSummary s;
        s.name = names[static_cast<std::size_t>(j)];
        // running mean; exact for constant samples
        double mean = 0.0;
        for (std::size_t k = 0; k < pooled.size(); ++k) mean += (pooled[k] - mean) / static_cast<double>(k + 1);
        s.mean = mean;
        s.median = quantile(pooled, 0.5);
        s.q025 = quantile(pooled, 0.025);
        s.q975 = quantile(pooled, 0.975);
        s.r_hat = diagnose ? r_hat(chains, static_cast<int>(j)) : 1.0;
        s.ess = chains.front().rows() >= 4 ? ess(chains, static_cast<int>(j)) : static_cast<double>(pooled.size());
        out.params.push_back(std::move(s));
    }
    return out;
}

}  // namespace sudr

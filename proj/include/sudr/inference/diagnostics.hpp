#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace sudr {

/// One matrix per chain: rows are post-warmup iterations, columns parameters.
using ChainDraws = std::vector<Eigen::MatrixXd>;

/// Split-R-hat of one parameter. Returns 1.0 when every chain is the same
/// constant and +inf when chains are constant at different values.
double r_hat(const ChainDraws& chains, int param);

/// Multi-chain effective sample size over all pooled draws, with the
/// autocorrelation sum truncated at the first negative pair sum. A
/// zero-variance parameter returns the pooled draw count.
double ess(const ChainDraws& chains, int param);

/// Empirical quantile with linear interpolation between order statistics
/// (position p * (n - 1)).
double quantile(std::vector<double> values, double p);

struct ParameterSummary {
    std::string name;
    double mean{0};
    double median{0};
    double q025{0};
    double q975{0};
    double r_hat{1};
    double ess{0};
};

struct PosteriorSummary {
    std::vector<ParameterSummary> params;

    const ParameterSummary& at(const std::string& name) const;
    double max_r_hat() const;
    double min_ess() const;
    /// max R-hat < 1.05 and min ESS > 100.
    bool converged() const;
};

PosteriorSummary summarize(const ChainDraws& chains, const std::vector<std::string>& names);

}  // namespace sudr

#pragma once

#include <Eigen/Core>
#include <vector>

namespace sudr {

/// Autoregression y_t = c_0 + sum_j c_j y_{t-j}, j = 1..J, fitted by ridge.
///
/// Minimizes sum_t (y_t - c_0 - sum_j c_j y_{t-j})^2 + lambda * |c_1..c_J|^2
/// with an unpenalized intercept, via the normal equations. Returns
/// [c_0, c_1, ..., c_J]. Throws InsufficientDataError when the series has at
/// most J + 1 points and SingularSystemError when lambda = 0 and the design
/// is rank-deficient.
Eigen::VectorXd ridge_fit(const Eigen::VectorXd& series, int lag, double lambda);

/// Same fit using only the rows whose target and lags are all present.
/// Throws InsufficientDataError when fewer than J + 1 rows remain.
Eigen::VectorXd ridge_fit(const Eigen::VectorXd& series, const std::vector<bool>& present, int lag, double lambda);

/// One-step prediction c_0 + sum_j c_j history[end - j].
double ridge_predict(const Eigen::VectorXd& coeffs, const std::vector<double>& history);

}  // namespace sudr

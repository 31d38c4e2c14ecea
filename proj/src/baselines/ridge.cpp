#include "sudr/baselines/ridge.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <string>

#include "sudr/errors.hpp"

namespace sudr {

Eigen::VectorXd ridge_fit(const Eigen::VectorXd& series, int lag, double lambda) {
    if (series.size() <= lag + 1)
        throw InsufficientDataError("ridge_fit needs more than " + std::to_string(lag + 1) + " points, got " +
                                    std::to_string(series.size()));
    return ridge_fit(series, std::vector<bool>(static_cast<std::size_t>(series.size()), true), lag, lambda);
}

Eigen::VectorXd ridge_fit(const Eigen::VectorXd& series, const std::vector<bool>& present, int lag, double lambda) {
    if (lag < 0) throw DomainError("ridge lag must be >= 0");
    if (!(lambda >= 0)) throw DomainError("ridge lambda must be >= 0");
    if (present.size() != static_cast<std::size_t>(series.size()))
        throw DomainError("ridge_fit: mask length differs from series length");

    std::vector<Eigen::Index> rows;
    for (Eigen::Index t = lag; t < series.size(); ++t) {
        bool usable = present[static_cast<std::size_t>(t)];
        for (int j = 1; j <= lag && usable; ++j) usable = present[static_cast<std::size_t>(t - j)];
        if (usable) rows.push_back(t);
    }
    if (static_cast<int>(rows.size()) < lag + 1)
        throw InsufficientDataError("ridge_fit has " + std::to_string(rows.size()) + " complete rows for " +
                                    std::to_string(lag + 1) + " coefficients");

    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), lag + 1);
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Eigen::Index i = static_cast<Eigen::Index>(r);
        x(i, 0) = 1.0;
        for (int j = 1; j <= lag; ++j) x(i, j) = series[rows[r] - j];
        y[i] = series[rows[r]];
    }
    Eigen::MatrixXd normal = x.transpose() * x;
    normal.diagonal().tail(lag).array() += lambda;
    const Eigen::VectorXd rhs = x.transpose() * y;

    if (lambda == 0.0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
        lu.setThreshold(1e-12);
        if (lu.rank() < normal.rows())
            throw SingularSystemError("ridge design is rank-deficient with lambda = 0");
        return lu.solve(rhs);
    }
    // Positive definite for lambda > 0: the only penalty-free direction is the
    // intercept, whose column is all ones.
    return normal.ldlt().solve(rhs);
}

double ridge_predict(const Eigen::VectorXd& coeffs, const std::vector<double>& history) {
    const Eigen::Index lag = coeffs.size() - 1;
    if (static_cast<Eigen::Index>(history.size()) < lag) throw DomainError("ridge_predict: history shorter than lag");
    double v = coeffs[0];
    for (Eigen::Index j = 1; j <= lag; ++j) v += coeffs[j] * history[history.size() - static_cast<std::size_t>(j)];
    return v;
}

}  // namespace sudr

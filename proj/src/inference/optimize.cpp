#include "sudr/inference/optimize.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <limits>

#include "sudr/errors.hpp"

namespace sudr {

ModeResult find_mode(const LogDensity& target, const Eigen::VectorXd& start, int max_iter, double grad_tol) {
    const Eigen::Index n = start.size();
    ModeResult res;
    res.position = start;
    res.log_density = target.value(start);
    if (!std::isfinite(res.log_density)) throw DomainError("find_mode: start has non-finite log density");

    Eigen::VectorXd g = target.gradient(res.position);
    Eigen::MatrixXd inv_h = Eigen::MatrixXd::Identity(n, n);
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it;
        if (g.lpNorm<Eigen::Infinity>() < grad_tol) {
            res.converged = true;
            break;
        }
        Eigen::VectorXd dir = inv_h * g;
        if (dir.dot(g) <= 0) {
            inv_h.setIdentity();
            dir = g;
        }
        // cap the first trial step so a poor curvature estimate cannot jump far
        double step = std::min(1.0, 2.0 / std::max(1e-12, dir.lpNorm<Eigen::Infinity>()));
        const double slope = dir.dot(g);
        Eigen::VectorXd next;
        double lp_next = 0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            next = res.position + step * dir;
            lp_next = target.value(next);
            if (std::isfinite(lp_next) && lp_next >= res.log_density + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        Eigen::VectorXd g_next;
        try {
            g_next = target.gradient(next);
        } catch (const Error&) {
            break;
        }
        const Eigen::VectorXd s = next - res.position;
        // minimising -log p, so the gradient difference flips sign
        const Eigen::VectorXd y = g - g_next;
        const double sy = s.dot(y);
        if (sy > 1e-12) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            inv_h = (eye - rho * s * y.transpose()) * inv_h * (eye - rho * y * s.transpose()) + rho * s * s.transpose();
        }
        const double improvement = lp_next - res.log_density;
        res.position = next;
        res.log_density = lp_next;
        g = g_next;
        if (improvement < 1e-12 * (1.0 + std::abs(lp_next)) && g.lpNorm<Eigen::Infinity>() < 1e3 * grad_tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

Eigen::MatrixXd numerical_hessian(const LogDensity& target, const Eigen::VectorXd& z) {
    const Eigen::Index n = z.size();
    Eigen::MatrixXd h(n, n);
    Eigen::VectorXd probe = z;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double step = 1e-4 * std::max(1.0, std::abs(z[i]));
        probe[i] = z[i] + step;
        const Eigen::VectorXd up = target.gradient(probe);
        probe[i] = z[i] - step;
        const Eigen::VectorXd down = target.gradient(probe);
        probe[i] = z[i];
        h.col(i) = (up - down) / (2 * step);
    }
    return 0.5 * (h + h.transpose());
}

Initializer laplace_initializer(const LogDensity& target, StartSampler rough, std::uint64_t seed, int restarts) {
    // Single climbs occasionally stall in a poor-fit basin, and chains
    // started in different basins rarely meet, so the search is shared.
    std::mt19937_64 search_rng(seed);
    Eigen::VectorXd mode;
    double best = -std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < restarts; ++attempt) {
        const Eigen::VectorXd z = rough(search_rng);
        if (!std::isfinite(target.value(z))) continue;
        try {
            const ModeResult found = find_mode(target, z);
            if (found.log_density > best) {
                best = found.log_density;
                mode = found.position;
            }
        } catch (const Error&) {
        }
    }
    if (!std::isfinite(best)) {
        return [rough](std::mt19937_64& rng) {
            ChainStart start;
            start.position = rough(rng);
            return start;
        };
    }

    Eigen::MatrixXd covariance;
    Eigen::MatrixXd factor;
    try {
        const Eigen::MatrixXd neg_h = -numerical_hessian(target, mode);
        Eigen::LLT<Eigen::MatrixXd> llt(neg_h);
        if (llt.info() == Eigen::Success) {
            covariance = llt.solve(Eigen::MatrixXd::Identity(neg_h.rows(), neg_h.cols()));
            factor = Eigen::LLT<Eigen::MatrixXd>(covariance).matrixL();
        }
    } catch (const Error&) {
    }
    return [mode, covariance, factor](std::mt19937_64& rng) {
        ChainStart start;
        start.position = mode;
        start.inv_metric = covariance;
        if (factor.size() != 0) {
            std::normal_distribution<double> normal;
            Eigen::VectorXd n(mode.size());
            for (Eigen::Index i = 0; i < n.size(); ++i) n[i] = normal(rng);
            start.position += factor * n;
        }
        return start;
    };
}

}  // namespace sudr

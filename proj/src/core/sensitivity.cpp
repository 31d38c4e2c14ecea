#include "sudr/core/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sudr {

namespace {

// Bernstein basis b_i(x) for degree n, plus d beta / dx for coefficients xi.
struct BasisAt {
    Eigen::VectorXd basis;
    double value{0};
    double slope{0};
};

void evaluate_basis(double x, const Eigen::VectorXd& xi, BasisAt& out) {
    const int n = static_cast<int>(xi.size()) - 1;
    // Degree k basis from degree k - 1 by the two-term recurrence.
    out.basis.setZero();
    out.basis[0] = 1.0;
    double lower_slope = 0.0;
    for (int k = 1; k <= n; ++k) {
        if (k == n) {
            // degree n - 1 basis is in place: slope = n * sum (xi_{i+1} - xi_i) b_i^{n-1}
            lower_slope = 0.0;
            for (int i = 0; i < n; ++i) lower_slope += (xi[i + 1] - xi[i]) * out.basis[i];
            lower_slope *= n;
        }
        for (int i = k; i >= 1; --i) out.basis[i] = (1.0 - x) * out.basis[i] + x * out.basis[i - 1];
        out.basis[0] *= (1.0 - x);
    }
    out.value = xi.dot(out.basis);
    out.slope = lower_slope;
}

}  // namespace

PrevalenceSensitivity prevalence_sensitivity(const ModelParams& p, int days, int substeps_per_day) {
    if (days < 1) throw DomainError("prevalence_sensitivity: days must be >= 1");
    if (substeps_per_day < 1) throw DomainError("prevalence_sensitivity: substeps_per_day must be >= 1");
    if (p.contagion.coeffs.size() == 0) throw DomainError("contagion function has no coefficients");

    const Eigen::VectorXd& xi = p.contagion.coeffs;
    const int n = p.contagion.degree();
    const int m = n + 6;
    const int col_theta = n + 1;
    const int col_gamma = n + 2;
    const double theta = p.theta;
    const double gamma = p.gamma;
    const double h = 1.0 / substeps_per_day;

    using Vec = Eigen::Vector4d;
    using Tangent = Eigen::Matrix<double, 4, Eigen::Dynamic>;
    BasisAt basis;
    basis.basis.resize(n + 1);
    Eigen::RowVectorXd dinf(m);

    // Field and its directional derivative: K = J(y) T + dF/dq.
    const auto stage = [&](const Vec& y, const Tangent& t, Vec& k, Tangent& dk) {
        const double s = y[0];
        const double u = y[1];
        const double d = y[2];
        const double uc = std::clamp(u, 0.0, 1.0);
        evaluate_basis(uc, xi, basis);
        const double b = basis.value;
        const double db = (u >= 0.0 && u <= 1.0) ? basis.slope : 0.0;
        const double inf = b * s * u;
        k << -inf, inf - (theta + gamma) * u, theta * u - gamma * d, gamma * (u + d);

        // derivative of the infection term b * s * u
        dinf = (b * u) * t.row(0) + (b * s + db * s * u) * t.row(1);
        dinf.head(n + 1) += (s * u) * basis.basis.transpose();
        dk.row(0) = -dinf;
        dk.row(1) = dinf - (theta + gamma) * t.row(1);
        dk.row(1)(col_theta) -= u;
        dk.row(1)(col_gamma) -= u;
        dk.row(2) = theta * t.row(1) - gamma * t.row(2);
        dk.row(2)(col_theta) += u;
        dk.row(2)(col_gamma) -= d;
        dk.row(3) = gamma * (t.row(1) + t.row(2));
        dk.row(3)(col_gamma) += u + d;
    };

    Vec y = p.y0.vector();
    Tangent t = Tangent::Zero(4, m);
    t(0, n + 3) = 1.0;
    t(1, n + 4) = 1.0;
    t(2, n + 5) = 1.0;
    Vec k1, k2, k3, k4, ys;
    Tangent d1(4, m), d2(4, m), d3(4, m), d4(4, m), ts(4, m);

    const auto check = [&](double time) {
        for (int i = 0; i < 4; ++i) {
            if (!std::isfinite(y[i]) || std::abs(y[i]) > kBlowupMagnitude)
                throw BlowupError("state component " + std::to_string(i) + " diverged at t=" + std::to_string(time));
            if (y[i] < 0) {
                if (y[i] <= -kDensityTolerance)
                    throw BlowupError("state component " + std::to_string(i) + " went negative at t=" +
                                      std::to_string(time));
                y[i] = 0;
                t.row(i).setZero();
            }
        }
    };
    check(0.0);

    PrevalenceSensitivity out;
    out.mean.resize(days);
    out.jacobian.resize(days, m);
    out.undocumented.resize(days);
    out.undocumented_jacobian.resize(days, m);
    for (int day = 1; day <= days; ++day) {
        for (int sub = 0; sub < substeps_per_day; ++sub) {
            stage(y, t, k1, d1);
            ys = y + (h / 2) * k1;
            ts = t + (h / 2) * d1;
            stage(ys, ts, k2, d2);
            ys = y + (h / 2) * k2;
            ts = t + (h / 2) * d2;
            stage(ys, ts, k3, d3);
            ys = y + h * k3;
            ts = t + h * d3;
            stage(ys, ts, k4, d4);
            y += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += (h / 6) * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
            check(day - 1 + (sub + 1) * h);
        }
        out.mean[day - 1] = y[2];
        out.jacobian.row(day - 1) = t.row(2);
        out.undocumented[day - 1] = y[1];
        out.undocumented_jacobian.row(day - 1) = t.row(1);
    }
    return out;
}

}  // namespace sudr

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <type_traits>

#include "sudr/core/dynamics.hpp"
#include "sudr/errors.hpp"

namespace sudr {

inline constexpr int kDefaultSubsteps = 10;
inline constexpr double kBlowupMagnitude = 10.0;

/// Daily states t = 0..T of an integrated vector field; row t of `states`
/// is the state at day t.
template <typename Scalar, int Dim>
struct Trajectory {
    Eigen::VectorXd times;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Dim> states;
    double substep{0.1};

    Eigen::Index size() const { return states.rows(); }
};

using SudrTrajectory = Trajectory<double, 4>;
using SirTrajectory = Trajectory<double, 3>;

namespace detail {

template <typename Scalar>
double value_of(const Scalar& v) {
    if constexpr (std::is_arithmetic_v<Scalar>)
        return static_cast<double>(v);
    else
        return v.value();
}

template <typename Vector>
void clamp_and_check(Vector& y, double t) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        auto& v = y[i];
        const double x = value_of(v);
        if (!std::isfinite(x) || std::abs(x) > kBlowupMagnitude)
            throw BlowupError("state component " + std::to_string(i) + " diverged at t=" + std::to_string(t));
        if (x < 0) {
            if (x > -kDensityTolerance)
                v = 0;
            else
                throw BlowupError("state component " + std::to_string(i) + " went negative at t=" +
                                  std::to_string(t));
        }
    }
}

}  // namespace detail

/// Classical fixed-step RK4 with h = 1/substeps_per_day, recording one state
/// per day. `field` maps a state vector to its time derivative.
template <typename Field, typename Scalar, int Dim>
Trajectory<Scalar, Dim> integrate(Field&& field, const Eigen::Matrix<Scalar, Dim, 1>& y0, int days,
                                  int substeps_per_day = kDefaultSubsteps) {
    if (days < 1) throw DomainError("integrate: days must be >= 1");
    if (substeps_per_day < 1) throw DomainError("integrate: substeps_per_day must be >= 1");

    using Vector = Eigen::Matrix<Scalar, Dim, 1>;
    const double h = 1.0 / substeps_per_day;

    Trajectory<Scalar, Dim> traj;
    traj.substep = h;
    traj.times = Eigen::VectorXd::LinSpaced(days + 1, 0, days);
    traj.states.resize(days + 1, y0.size());

    Vector y = y0;
    detail::clamp_and_check(y, 0.0);
    traj.states.row(0) = y.transpose();
    for (int day = 1; day <= days; ++day) {
        for (int k = 0; k < substeps_per_day; ++k) {
            const Vector k1 = field(y);
            const Vector k2 = field(Vector(y + (h / 2) * k1));
            const Vector k3 = field(Vector(y + (h / 2) * k2));
            const Vector k4 = field(Vector(y + h * k3));
            y += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            detail::clamp_and_check(y, day - 1 + (k + 1) * h);
        }
        traj.states.row(day) = y.transpose();
    }
    return traj;
}

SudrTrajectory integrate_sudr(const ModelParams& p, int days, int substeps_per_day = kDefaultSubsteps);

SirTrajectory integrate_complex_sir(const ContagionFunction& f, double gamma, const SirState<double>& y0, int days,
                                    int substeps_per_day = kDefaultSubsteps);

SirTrajectory integrate_sir(double beta, double gamma, const SirState<double>& y0, int days,
                            int substeps_per_day = kDefaultSubsteps);

/// Documented density i_d(t) for t = 1..T from the SUDR mean-field trajectory.
Eigen::VectorXd mean_field_prevalence(const ModelParams& p, int days, int substeps_per_day = kDefaultSubsteps);

}  // namespace sudr

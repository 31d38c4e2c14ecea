#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace sudr {

/// Hyperparameters of the SUDR prior.
///
/// Scales: a (sigma^2), b (mu_xi), c (delta_i), d (theta), e (gamma),
/// f/g/h (S0, I^U0, I^D0). Locations: mu_theta, mu_gamma, mu_s0, mu_iu0,
/// mu_id0. Half-distributions with a nonzero location are truncated to
/// [location, inf) and renormalized.
struct PriorSpec {
    double a{1.0};
    double b{10.0};
    double c{5.0};
    double d{1.0};
    double e{10.0};
    double f{1.0};
    double g{1.0};
    double h{1.0};
    double mu_theta{0.0};
    double mu_gamma{0.0};
    double mu_s0{0.01};
    double mu_iu0{0.0};
    double mu_id0{0.0};

    bool valid() const { return a > 0 && b > 0 && c > 0 && d > 0 && e > 0 && f > 0 && g > 0 && h > 0; }
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double normal_lpdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return -0.5 * std::log(2.0 * std::numbers::pi) - std::log(sd) - 0.5 * z * z;
}

inline double half_normal_lpdf(double x, double location, double scale) {
    if (!(x >= location)) return kNegInf;
    return std::log(2.0) + normal_lpdf(x, location, scale);
}

inline double half_cauchy_lpdf(double x, double location, double scale) {
    if (!(x >= location)) return kNegInf;
    const double z = (x - location) / scale;
    return std::log(2.0) - std::log(std::numbers::pi * scale) - std::log1p(z * z);
}

}  // namespace sudr

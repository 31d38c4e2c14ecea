#pragma once

#include <algorithm>

#include "sudr/core/bernstein.hpp"
#include "sudr/core/state.hpp"

namespace sudr {

/// Full SUDR parameter set in constrained space.
struct ModelParams {
    ContagionFunction contagion;
    double theta{0};  ///< detection rate, 1/day
    double gamma{0};  ///< removal rate, 1/day
    double sigma{1};  ///< observation noise standard deviation
    EpidemicState<double> y0{};

    bool valid() const;
};

// The vector fields below work on densities, so the force of infection is
// beta(i_u) * s * i_u with no explicit 1/P factor. RK4 stages may step
// slightly outside [0, 1]; the contagion argument is clamped there and the
// integrator decides whether the excursion is a blow-up.

/// SUDR field with every parameter in the state's scalar type, so forward
/// derivatives can flow through the coefficients and rates.
template <typename Scalar, typename Coeffs>
EpidemicState<Scalar> sudr_field(const EpidemicState<Scalar>& y, const Coeffs& xi, const Scalar& theta,
                                 const Scalar& gamma) {
    const Scalar beta = detail::bernstein_sum(std::clamp(y.i_u, Scalar(0), Scalar(1)), xi);
    const Scalar infection = beta * y.s * y.i_u;
    const Scalar detection = theta * y.i_u;
    return {-infection, infection - detection - gamma * y.i_u, detection - gamma * y.i_d,
            gamma * (y.i_u + y.i_d)};
}

template <typename Scalar>
EpidemicState<Scalar> sudr_derivative(const EpidemicState<Scalar>& y, const ContagionFunction& beta_fn,
                                      double theta, double gamma) {
    return sudr_field(y, beta_fn.coeffs, Scalar(theta), Scalar(gamma));
}

template <typename Scalar>
EpidemicState<Scalar> sudr_derivative(const EpidemicState<Scalar>& y, const ModelParams& p) {
    return sudr_derivative(y, p.contagion, p.theta, p.gamma);
}

template <typename Scalar>
SirState<Scalar> sir_derivative(const SirState<Scalar>& y, double beta, double gamma) {
    const Scalar infection = beta * y.s * y.i;
    return {-infection, infection - gamma * y.i, gamma * y.i};
}

/// SIR with beta replaced by the density-dependent B_N(i; xi).
template <typename Scalar>
SirState<Scalar> complex_sir_derivative(const SirState<Scalar>& y, const ContagionFunction& f, double gamma) {
    const Scalar beta = detail::bernstein_sum(std::clamp(y.i, Scalar(0), Scalar(1)), f.coeffs);
    const Scalar infection = beta * y.s * y.i;
    return {-infection, infection - gamma * y.i, gamma * y.i};
}

}  // namespace sudr

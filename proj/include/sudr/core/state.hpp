#pragma once

#include <Eigen/Core>

namespace sudr {

template <typename Scalar>
using SudrVector = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
using SirVector = Eigen::Matrix<Scalar, 3, 1>;

/// Compartment densities of the SUDR model, each relative to the
/// effective subpopulation P = alpha * W.
template <typename Scalar>
struct EpidemicState {
    Scalar s{1};
    Scalar i_u{0};
    Scalar i_d{0};
    Scalar r{0};

    Scalar total() const { return s + i_u + i_d + r; }

    SudrVector<Scalar> vector() const { return {s, i_u, i_d, r}; }

    static EpidemicState from_vector(const SudrVector<Scalar>& v) { return {v[0], v[1], v[2], v[3]}; }

    bool valid() const { return s >= 0 && i_u >= 0 && i_d >= 0 && r >= 0; }
};

/// Susceptible / infectious / removed densities for the SIR-family baselines.
template <typename Scalar>
struct SirState {
    Scalar s{1};
    Scalar i{0};
    Scalar r{0};

    SirVector<Scalar> vector() const { return {s, i, r}; }

    static SirState from_vector(const SirVector<Scalar>& v) { return {v[0], v[1], v[2]}; }
};

/// Whole population W, involved fraction alpha, and effective subpopulation P.
struct PopulationScaling {
    double w{1.0};
    double alpha{0.01};
    double p{0.01};

    static PopulationScaling make(double w, double alpha = 0.01);
};

}  // namespace sudr

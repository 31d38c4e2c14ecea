#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>

#include "sudr/errors.hpp"

namespace sudr {

/// Bernstein-polynomial contagion function beta(x) = B_N(x; xi).
///
/// Coefficients are the xi_0..xi_N; the degree is coeffs.size() - 1. With
/// nonnegative coefficients the rate is nonnegative and bounded by the
/// largest coefficient on [0, 1].
template <typename Scalar>
struct BasicContagion {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    static BasicContagion constant(Scalar beta, int degree = 0) {
        return {Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Constant(degree + 1, beta)};
    }
};

using ContagionFunction = BasicContagion<double>;

inline constexpr double kDensityTolerance = 1e-12;

namespace detail {

// Closed-form sum without the domain check. x must already lie in [0, 1].
template <typename Scalar, typename Coeffs>
Scalar bernstein_sum(Scalar x, const Coeffs& xi) {
    const int n = static_cast<int>(xi.size()) - 1;
    if (n == 0) return xi[0];
    const Scalar y = Scalar(1) - x;
    // powers of (1 - x) from N down to 0, accumulated alongside x^i and C(N, i)
    Scalar ypow[64];
    Scalar* yp = ypow;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> heap;
    if (n + 1 > 64) {
        heap.resize(n + 1);
        yp = heap.data();
    }
    yp[0] = Scalar(1);
    for (int k = 1; k <= n; ++k) yp[k] = yp[k - 1] * y;
    Scalar sum(0);
    Scalar xpow(1);
    Scalar binom(1);
    for (int i = 0; i <= n; ++i) {
        sum += xi[i] * binom * xpow * yp[n - i];
        xpow *= x;
        binom = binom * Scalar(n - i) / Scalar(i + 1);
    }
    return sum;
}

}  // namespace detail

/// Evaluates B_N(x; xi) = sum_i xi_i C(N,i) x^i (1-x)^(N-i).
/// Throws DomainError when x is outside [0, 1] by more than 1e-12.
template <typename Scalar>
Scalar bernstein_eval(Scalar x, const BasicContagion<Scalar>& f) {
    if (f.coeffs.size() == 0) throw DomainError("contagion function has no coefficients");
    if (!(x >= -kDensityTolerance && x <= 1 + kDensityTolerance))
        throw DomainError("bernstein argument outside [0,1]: " + std::to_string(static_cast<double>(x)));
    x = std::clamp(x, Scalar(0), Scalar(1));
    return detail::bernstein_sum(x, f.coeffs);
}

}  // namespace sudr

#include "sudr/inference/parameters.hpp"

#include <cmath>

#include "sudr/errors.hpp"

namespace sudr {

ModelParams SampledParams::model() const {
    ModelParams p;
    p.contagion.coeffs = xi();
    p.theta = theta;
    p.gamma = gamma;
    p.sigma = sigma;
    p.y0 = {s0, iu0, id0, 0.0};
    return p;
}

namespace {

Eigen::VectorXd lower_bounds(int degree, const PriorSpec& spec) {
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(unconstrained_dimension(degree));
    const int k = degree + 2;
    lo[k] = spec.mu_theta;
    lo[k + 1] = spec.mu_gamma;
    lo[k + 3] = spec.mu_s0;
    lo[k + 4] = spec.mu_iu0;
    lo[k + 5] = spec.mu_id0;
    return lo;
}

double logistic(double x) {
    return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

Eigen::VectorXd packed(const SampledParams& p) {
    const int n = p.degree();
    Eigen::VectorXd v(unconstrained_dimension(n));
    v[0] = p.mu_xi;
    v.segment(1, n + 1) = p.delta;
    v.tail<6>() << p.theta, p.gamma, p.sigma, p.s0, p.iu0, p.id0;
    return v;
}

// log(sigmoid(x) * (1 - sigmoid(x))), stable for large |x|
double log_logistic_slope(double x) { return -std::abs(x) - 2.0 * std::log1p(std::exp(-std::abs(x))); }

}  // namespace

Eigen::VectorXd hierarchy_to_unconstrained(double mu_xi, const Eigen::VectorXd& delta) {
    if (!(mu_xi > 0) || delta.size() == 0 || !(delta.array() > 0).all())
        throw DomainError("hierarchy needs mu_xi > 0 and delta_i > 0");
    const Eigen::VectorXd xi = delta.array() + mu_xi;
    const double share = mu_xi / xi.minCoeff();
    Eigen::VectorXd z(xi.size() + 1);
    z[0] = std::log(share) - std::log1p(-share);
    z.tail(xi.size()) = xi.array().log();
    return z;
}

void hierarchy_from_unconstrained(const Eigen::Ref<const Eigen::VectorXd>& coords, double& mu_xi,
                                  Eigen::VectorXd& delta) {
    const Eigen::VectorXd xi = coords.tail(coords.size() - 1).array().exp();
    Eigen::Index smallest = 0;
    const double floor = xi.minCoeff(&smallest);
    mu_xi = floor * logistic(coords[0]);
    delta = xi.array() - mu_xi;
    delta[smallest] = floor * logistic(-coords[0]);
}

double hierarchy_log_jacobian(const Eigen::Ref<const Eigen::VectorXd>& coords) {
    const auto log_xi = coords.tail(coords.size() - 1);
    return log_xi.sum() + log_xi.minCoeff() + log_logistic_slope(coords[0]);
}

Eigen::VectorXd to_unconstrained(const SampledParams& p, const PriorSpec& spec) {
    if (p.delta.size() == 0) throw DomainError("sampled parameters have no delta coordinates");
    const int n = p.degree();
    const Eigen::VectorXd lo = lower_bounds(n, spec);
    const Eigen::VectorXd shifted = packed(p) - lo;
    if ((shifted.array() <= 0).any()) throw DomainError("parameter at or below its support boundary");
    Eigen::VectorXd z = shifted.array().log();
    z.head(n + 2) = hierarchy_to_unconstrained(p.mu_xi, p.delta);
    for (int k = n + 5; k < n + 8; ++k) {
        const double u = shifted[k] / (1.0 - lo[k]);
        if (!(u < 1.0)) throw DomainError("initial density at or above 1");
        z[k] = std::log(u) - std::log1p(-u);
    }
    return z;
}

SampledParams from_unconstrained(const Eigen::VectorXd& z, const PriorSpec& spec) {
    const int n = static_cast<int>(z.size()) - 8;
    if (n < 0) throw DomainError("unconstrained vector too short");
    const Eigen::VectorXd lo = lower_bounds(n, spec);
    Eigen::VectorXd v = z.array().exp().matrix() + lo;
    for (int k = n + 5; k < n + 8; ++k) v[k] = lo[k] + (1.0 - lo[k]) * logistic(z[k]);
    SampledParams p;
    hierarchy_from_unconstrained(z.head(n + 2), p.mu_xi, p.delta);
    const auto t = v.tail<6>();
    p.theta = t[0];
    p.gamma = t[1];
    p.sigma = t[2];
    p.s0 = t[3];
    p.iu0 = t[4];
    p.id0 = t[5];
    return p;
}

double log_jacobian(const Eigen::VectorXd& z, const PriorSpec& spec) {
    const Eigen::Index n = z.size() - 8;
    double jac = hierarchy_log_jacobian(z.head(n + 2));
    jac += z.segment(n + 2, 3).sum();
    const double lower[3] = {spec.mu_s0, spec.mu_iu0, spec.mu_id0};
    for (int k = 0; k < 3; ++k) jac += log_logistic_slope(z[n + 5 + k]) + std::log(1.0 - lower[k]);
    return jac;
}

std::vector<std::string> parameter_names(int degree) {
    std::vector<std::string> names{"mu_xi"};
    for (int i = 0; i <= degree; ++i) names.push_back("delta_" + std::to_string(i));
    for (int i = 0; i <= degree; ++i) names.push_back("xi_" + std::to_string(i));
    for (const char* s : {"theta", "gamma", "sigma", "s0", "iu0", "id0"}) names.emplace_back(s);
    return names;
}

Eigen::VectorXd flatten(const SampledParams& p) {
    const int n = p.degree();
    Eigen::VectorXd v(2 * (n + 1) + 7);
    v[0] = p.mu_xi;
    v.segment(1, n + 1) = p.delta;
    v.segment(n + 2, n + 1) = p.xi();
    v.tail<6>() << p.theta, p.gamma, p.sigma, p.s0, p.iu0, p.id0;
    return v;
}

SampledParams unflatten(const Eigen::VectorXd& v, int degree) {
    if (v.size() != 2 * (degree + 1) + 7) throw DomainError("flattened parameter vector has wrong length");
    SampledParams p;
    p.mu_xi = v[0];
    p.delta = v.segment(1, degree + 1);
    const auto t = v.tail<6>();
    p.theta = t[0];
    p.gamma = t[1];
    p.sigma = t[2];
    p.s0 = t[3];
    p.iu0 = t[4];
    p.id0 = t[5];
    return p;
}

}  // namespace sudr

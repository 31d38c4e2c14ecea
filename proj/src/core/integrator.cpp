#include "sudr/core/integrator.hpp"

namespace sudr {

PopulationScaling PopulationScaling::make(double w, double alpha) {
    if (!(w > 0)) throw DomainError("population must be positive");
    if (!(alpha > 0 && alpha <= 1)) throw DomainError("alpha must lie in (0, 1]");
    return {w, alpha, alpha * w};
}

bool ModelParams::valid() const {
    if (contagion.coeffs.size() == 0 || (contagion.coeffs.array() < 0).any()) return false;
    if (!(theta >= 0 && gamma >= 0 && sigma > 0)) return false;
    const auto in_unit = [](double v) { return v >= 0 && v <= 1; };
    return in_unit(y0.s) && in_unit(y0.i_u) && in_unit(y0.i_d) && in_unit(y0.r);
}

SudrTrajectory integrate_sudr(const ModelParams& p, int days, int substeps_per_day) {
    const auto field = [&p](const SudrVector<double>& v) {
        return sudr_derivative(EpidemicState<double>::from_vector(v), p).vector();
    };
    return integrate(field, p.y0.vector(), days, substeps_per_day);
}

SirTrajectory integrate_complex_sir(const ContagionFunction& f, double gamma, const SirState<double>& y0, int days,
                                    int substeps_per_day) {
    const auto field = [&](const SirVector<double>& v) {
        return complex_sir_derivative(SirState<double>::from_vector(v), f, gamma).vector();
    };
    return integrate(field, y0.vector(), days, substeps_per_day);
}

SirTrajectory integrate_sir(double beta, double gamma, const SirState<double>& y0, int days, int substeps_per_day) {
    const auto field = [&](const SirVector<double>& v) {
        return sir_derivative(SirState<double>::from_vector(v), beta, gamma).vector();
    };
    return integrate(field, y0.vector(), days, substeps_per_day);
}

Eigen::VectorXd mean_field_prevalence(const ModelParams& p, int days, int substeps_per_day) {
    const SudrTrajectory traj = integrate_sudr(p, days, substeps_per_day);
    return traj.states.col(2).tail(days);
}

}  // namespace sudr

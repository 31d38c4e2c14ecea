#include "sudr/experiment/presets.hpp"

#include "sudr/errors.hpp"

namespace sudr {

namespace {

ModelParams truth(double xi0, double xi1, double xi2, double theta, double gamma, double sigma,
                  EpidemicState<double> y0) {
    ModelParams p;
    p.contagion.coeffs = Eigen::Vector3d(xi0, xi1, xi2);
    p.theta = theta;
    p.gamma = gamma;
    p.sigma = sigma;
    p.y0 = y0;
    return p;
}

}  // namespace

ModelParams recovery_truth() { return truth(5.0, 4.0, 3.0, 0.8, 1.0, 5e-4, {0.6, 1e-3, 0.0, 0.0}); }

ModelParams robustness_truth() { return truth(1.0, 0.2, 0.05, 0.5, 0.1, 1e-3, {0.9, 0.01, 0.01, 0.0}); }

std::vector<std::string> preset_names() { return {"recovery", "robustness"}; }

ModelParams preset_truth(const std::string& name) {
    if (name == "recovery") return recovery_truth();
    if (name == "robustness") return robustness_truth();
    throw ConfigError("unknown synthetic preset '" + name + "'");
}

SyntheticDataset make_preset(const std::string& name, std::uint64_t seed, int days) {
    SyntheticDataset ds = synthesize(preset_truth(name), days, PopulationScaling::make(1e6, 1.0), seed);
    ds.obs.country = "synthetic-" + name;
    return ds;
}

}  // namespace sudr

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sudr/core/dynamics.hpp"
#include "sudr/data/synthetic.hpp"

namespace sudr {

inline constexpr int kPresetDays = 60;

/// Degree-2 truth used for parameter recovery: xi = (5, 4, 3),
/// theta = 0.8, gamma = 1, sigma = 5e-4, from S0 = 0.6 and I^U0 = 1e-3.
ModelParams recovery_truth();

/// Degree-2 truth whose contagion falls steeply with prevalence, so the
/// documented transmission rate decays over the window.
ModelParams robustness_truth();

/// "recovery" or "robustness"; throws ConfigError otherwise.
ModelParams preset_truth(const std::string& name);
std::vector<std::string> preset_names();

/// The preset's dataset over `days` with seed-fixed noise. W = 1e6 and
/// alpha = 1, so densities and counts differ by P = 1e6.
SyntheticDataset make_preset(const std::string& name, std::uint64_t seed, int days = kPresetDays);

}  // namespace sudr

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sudr/baselines/backtest.hpp"
#include "sudr/baselines/complex_sir.hpp"
#include "sudr/baselines/sir.hpp"
#include "sudr/data/observation.hpp"
#include "sudr/inference/sudr_fit.hpp"

namespace sudr {

/// Model labels in report order.
inline const std::vector<std::string>& robustness_models() {
    static const std::vector<std::string> names{"sir", "td_sir", "complex_sir", "sudr"};
    return names;
}

struct RobustnessConfig {
    std::vector<double> levels{0.0, 0.05, 0.10, 0.20};
    /// Seeds both the masks and the two HMC fits. Masks drawn with one
    /// seed are nested across levels.
    std::uint64_t seed{1};
    SudrFitConfig sudr{};
    ComplexSirConfig complex_sir{};
    TimeDependentSirConfig td_sir{};
};

struct ModelFailure {
    std::string model;
    std::string kind;
    std::string message;
};

/// All four backtests on one masked copy of the data.
struct RobustnessRun {
    double level{0};
    std::uint64_t seed{0};
    ObservationSeries masked;
    std::vector<BacktestResult> results;
    std::vector<ModelFailure> failures;

    const BacktestResult* find(const std::string& model) const;
};

struct RobustnessReport {
    std::vector<RobustnessRun> runs;

    int failure_count() const;
    /// Mean RMSE of `model` over the runs at `level` where it succeeded;
    /// NaN when none did.
    double mean_rmse(const std::string& model, double level) const;
};

/// Masks `obs` at `level` and backtests every model from day 1. A model that
/// throws is recorded as a failure and the others still run.
RobustnessRun run_robustness_level(const ObservationSeries& obs, double level, const RobustnessConfig& config);

/// Every level of the config. Needs at least 30 days and a removed series.
RobustnessReport run_robustness(const ObservationSeries& obs, const RobustnessConfig& config);

/// `day,observed,predicted_<model>...`; masked observations and failed
/// models leave their cells empty.
void write_backtest_csv(std::ostream& out, const RobustnessRun& run);

/// Mean RMSE per model per level plus every individual run.
void write_robustness_summary(std::ostream& out, const RobustnessReport& report);

}  // namespace sudr

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sudr/core/integrator.hpp"
#include "sudr/data/observation.hpp"
#include "sudr/experiment/artifacts.hpp"

namespace sudr {

/// Peak comparison for one country, in counts (densities times P).
struct PeakReport {
    std::string country;
    double population{0};
    std::string period;
    double peak_documented{0};  ///< largest observed active count
    double peak_undocumented_mean{0};
    double peak_undocumented_q025{0};
    double peak_undocumented_q975{0};
    /// Per-draw max I^U / max I^D, summarized. Empty when the documented
    /// peak is 0.
    std::optional<double> ratio_mean;
    std::optional<double> ratio_q025;
    std::optional<double> ratio_q975;
    /// The documented series peaks on its last observed day, so the peak is
    /// the end-of-window maximum.
    bool still_rising{false};
    int draws{0};
    int failed_draws{0};
};

/// Each draw's undocumented peak is the maximum of i_u(t) over t = 1..T,
/// which is the end-of-window value when the curve is still rising.
PeakReport peak_report(const SampleTable& samples, const ObservationSeries& obs, int substeps = kDefaultSubsteps);

/// Columns match the study table: country, population, period, documented
/// peak, undocumented peak mean and CI, ratio mean and CI, then flags.
void write_peak_csv(std::ostream& out, const std::vector<PeakReport>& rows);
void write_peak_json(std::ostream& out, const std::vector<PeakReport>& rows);

/// Box statistics of beta(i_u(t)) pooled over every draw and every day.
struct BetaReport {
    std::string country;
    double min{0};
    double q1{0};
    double median{0};
    double q3{0};
    double max{0};
    int values{0};
    /// (max - min) / median; above 0.1 the rate is flagged as varying.
    double relative_spread{0};
    bool varying{false};
};

BetaReport beta_report(const SampleTable& samples, const ObservationSeries& obs, int substeps = kDefaultSubsteps);

void write_beta_csv(std::ostream& out, const std::vector<BetaReport>& rows);
void write_beta_json(std::ostream& out, const std::vector<BetaReport>& rows);

}  // namespace sudr

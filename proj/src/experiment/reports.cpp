#include "sudr/experiment/reports.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <ostream>

#include "sudr/errors.hpp"
#include "sudr/inference/diagnostics.hpp"
#include "sudr/io/format.hpp"

namespace sudr {

namespace {

constexpr double kVaryingThreshold = 0.1;

std::vector<std::size_t> all_draws(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

PeakReport peak_report(const SampleTable& samples, const ObservationSeries& obs, int substeps) {
    obs.validate();
    PeakReport r;
    r.country = obs.country;
    r.population = obs.scaling.w;
    if (!obs.dates.empty()) r.period = obs.dates.front() + " to " + obs.dates.back();

    int last_present = 0;
    int argmax = 0;
    for (int k = 0; k < obs.size(); ++k) {
        if (!obs.is_present(k)) continue;
        last_present = k;
        if (obs.y[k] > obs.y[argmax] || !obs.is_present(argmax)) argmax = k;
    }
    // Counts are whole people; the rounding removes the density round trip.
    r.peak_documented = std::round(obs.y[argmax] * obs.scaling.p);
    r.still_rising = argmax == last_present && r.peak_documented > 0;

    const std::vector<SampledParams> draws = samples.pooled();
    const PosteriorTrajectories traj = posterior_trajectories(draws, all_draws(draws.size()), obs.size(), substeps);
    r.draws = static_cast<int>(traj.undocumented.rows());
    r.failed_draws = traj.failures;
    if (r.draws == 0) throw Error("sampler_failed", "no posterior draw produced a finite trajectory");

    std::vector<double> peaks, ratios;
    for (Eigen::Index i = 0; i < traj.undocumented.rows(); ++i) {
        const double peak = traj.undocumented.row(i).maxCoeff() * obs.scaling.p;
        peaks.push_back(peak);
        if (r.peak_documented > 0) ratios.push_back(peak / r.peak_documented);
    }
    r.peak_undocumented_mean = mean_of(peaks);
    r.peak_undocumented_q025 = quantile(peaks, 0.025);
    r.peak_undocumented_q975 = quantile(peaks, 0.975);
    if (!ratios.empty()) {
        r.ratio_mean = mean_of(ratios);
        r.ratio_q025 = quantile(ratios, 0.025);
        r.ratio_q975 = quantile(ratios, 0.975);
    }
    return r;
}

void write_peak_csv(std::ostream& out, const std::vector<PeakReport>& rows) {
    out << "country,population,period,peak_documented,peak_undocumented_mean,peak_undocumented_q025,"
           "peak_undocumented_q975,ratio_mean,ratio_q025,ratio_q975,ratio_missing,still_rising\n";
    for (const auto& r : rows) {
        out << r.country << ',' << format_double(r.population) << ',' << r.period << ','
            << format_double(r.peak_documented) << ',' << format_double(r.peak_undocumented_mean) << ','
            << format_double(r.peak_undocumented_q025) << ',' << format_double(r.peak_undocumented_q975) << ','
            << optional_text(r.ratio_mean) << ',' << optional_text(r.ratio_q025) << ',' << optional_text(r.ratio_q975)
            << ',' << (r.ratio_mean ? 0 : 1) << ',' << (r.still_rising ? 1 : 0) << '\n';
    }
}

void write_peak_json(std::ostream& out, const std::vector<PeakReport>& rows) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        j.push_back({{"country", r.country},
                     {"population", r.population},
                     {"period", r.period},
                     {"peak_documented", r.peak_documented},
                     {"peak_undocumented", {{"mean", r.peak_undocumented_mean},
                                            {"q025", r.peak_undocumented_q025},
                                            {"q975", r.peak_undocumented_q975}}},
                     {"ratio", {{"mean", optional_json(r.ratio_mean)},
                                {"q025", optional_json(r.ratio_q025)},
                                {"q975", optional_json(r.ratio_q975)}}},
                     {"ratio_missing", !r.ratio_mean.has_value()},
                     {"still_rising", r.still_rising},
                     {"draws", r.draws},
                     {"failed_draws", r.failed_draws}});
    out << j.dump(2) << '\n';
}

BetaReport beta_report(const SampleTable& samples, const ObservationSeries& obs, int substeps) {
    BetaReport r;
    r.country = obs.country;
    const std::vector<SampledParams> draws = samples.pooled();
    const PosteriorTrajectories traj = posterior_trajectories(draws, all_draws(draws.size()), obs.size(), substeps);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(traj.undocumented.size()));
    for (Eigen::Index i = 0; i < traj.undocumented.rows(); ++i) {
        const ContagionFunction f = draws[traj.draw_index[static_cast<std::size_t>(i)]].model().contagion;
        for (Eigen::Index d = 0; d < traj.undocumented.cols(); ++d)
            values.push_back(bernstein_eval(std::clamp(traj.undocumented(i, d), 0.0, 1.0), f));
    }
    if (values.empty()) throw Error("sampler_failed", "no posterior draw produced a finite trajectory");
    r.values = static_cast<int>(values.size());
    r.min = *std::min_element(values.begin(), values.end());
    r.max = *std::max_element(values.begin(), values.end());
    r.q1 = quantile(values, 0.25);
    r.median = quantile(values, 0.5);
    r.q3 = quantile(values, 0.75);
    r.relative_spread = r.median > 0 ? (r.max - r.min) / r.median : 0.0;
    r.varying = r.relative_spread > kVaryingThreshold;
    return r;
}

void write_beta_csv(std::ostream& out, const std::vector<BetaReport>& rows) {
    out << "country,min,q1,median,q3,max,values,relative_spread,varying\n";
    for (const auto& r : rows)
        out << r.country << ',' << format_double(r.min) << ',' << format_double(r.q1) << ','
            << format_double(r.median) << ',' << format_double(r.q3) << ',' << format_double(r.max) << ',' << r.values
            << ',' << format_double(r.relative_spread) << ',' << (r.varying ? 1 : 0) << '\n';
}

void write_beta_json(std::ostream& out, const std::vector<BetaReport>& rows) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        j.push_back({{"country", r.country},
                     {"min", r.min},
                     {"q1", r.q1},
                     {"median", r.median},
                     {"q3", r.q3},
                     {"max", r.max},
                     {"values", r.values},
                     {"relative_spread", r.relative_spread},
                     {"varying", r.varying}});
    out << j.dump(2) << '\n';
}

}  // namespace sudr

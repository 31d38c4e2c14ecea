#include "sudr/experiment/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <limits>
#include <ostream>

#include "sudr/data/masking.hpp"
#include "sudr/errors.hpp"
#include "sudr/io/format.hpp"

namespace sudr {

namespace {

constexpr int kMinimumDays = 30;

}  // namespace

const BacktestResult* RobustnessRun::find(const std::string& model) const {
    for (const auto& r : results)
        if (r.model_name == model) return &r;
    return nullptr;
}

int RobustnessReport::failure_count() const {
    int n = 0;
    for (const auto& r : runs) n += static_cast<int>(r.failures.size());
    return n;
}

double RobustnessReport::mean_rmse(const std::string& model, double level) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& run : runs) {
        if (run.level != level) continue;
        if (const BacktestResult* r = run.find(model)) {
            sum += r->rmse;
            ++n;
        }
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / n;
}

RobustnessRun run_robustness_level(const ObservationSeries& obs, double level, const RobustnessConfig& config) {
    RobustnessRun run;
    run.level = level;
    run.seed = config.seed;
    run.masked = mask_sparsity(obs, level, config.seed);
    const ObservationSeries& m = run.masked;
    const int horizon = m.size() - 1;

    const auto attempt = [&](const std::string& name, const std::function<Eigen::VectorXd()>& predict) {
        try {
            run.results.push_back(backtest(name, predict(), m));
        } catch (const Error& e) {
            run.failures.push_back({name, e.kind(), e.what()});
        } catch (const std::exception& e) {
            run.failures.push_back({name, "internal_error", e.what()});
        }
    };

    attempt("sir", [&] {
        const SirRates rates = fit_constant_sir(m, m.removed);
        return Eigen::VectorXd(predict_constant_sir(rates, documented_start(m, m.removed), horizon).col(1));
    });
    attempt("td_sir", [&] {
        const TimeDependentSir model = fit_time_dependent_sir(m, m.removed, config.td_sir);
        return Eigen::VectorXd(predict_time_dependent_sir(model, documented_start(m, m.removed), horizon).col(1));
    });
    attempt("complex_sir", [&] {
        ComplexSirConfig cc = config.complex_sir;
        cc.hmc.seed = config.seed;
        const ComplexSirFit fit = fit_complex_sir(m, m.removed, cc);
        return predict_complex_sir(fit.posterior_mean(), fit.y0, horizon, cc.substeps);
    });
    attempt("sudr", [&] {
        SudrFitConfig sc = config.sudr;
        sc.hmc.seed = config.seed;
        const SudrFit fit = fit_sudr(m, sc);
        return mean_field_prevalence(fit.posterior_mean().model(), m.size(), sc.substeps);
    });
    return run;
}

RobustnessReport run_robustness(const ObservationSeries& obs, const RobustnessConfig& config) {
    obs.validate();
    if (obs.size() < kMinimumDays)
        throw InsufficientDataError("robustness needs at least " + std::to_string(kMinimumDays) + " days, got " +
                                    std::to_string(obs.size()));
    if (obs.removed.size() != obs.y.size())
        throw DataError("missing_removed", "robustness needs the documented removed series");
    RobustnessReport report;
    for (double level : config.levels) report.runs.push_back(run_robustness_level(obs, level, config));
    return report;
}

void write_backtest_csv(std::ostream& out, const RobustnessRun& run) {
    const auto& models = robustness_models();
    out << "day,observed";
    for (const auto& m : models) out << ",predicted_" << m;
    out << '\n';
    for (int k = 0; k < run.masked.size(); ++k) {
        out << k + 1 << ',';
        if (run.masked.is_present(k)) out << format_double(run.masked.y[k]);
        for (const auto& m : models) {
            out << ',';
            if (const BacktestResult* r = run.find(m)) out << format_double(r->predicted[k]);
        }
        out << '\n';
    }
}

void write_robustness_summary(std::ostream& out, const RobustnessReport& report) {
    std::vector<double> levels;
    std::vector<std::uint64_t> seeds;
    for (const auto& r : report.runs) {
        if (std::find(levels.begin(), levels.end(), r.level) == levels.end()) levels.push_back(r.level);
        if (std::find(seeds.begin(), seeds.end(), r.seed) == seeds.end()) seeds.push_back(r.seed);
    }
    nlohmann::ordered_json j;
    j["models"] = robustness_models();
    j["levels"] = levels;
    j["seeds"] = seeds;
    nlohmann::ordered_json mean;
    for (const auto& m : robustness_models()) {
        nlohmann::ordered_json per_level;
        for (double level : levels) {
            const double v = report.mean_rmse(m, level);
            per_level[format_double(level)] = std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v);
        }
        mean[m] = per_level;
    }
    j["mean_rmse"] = mean;
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& run : report.runs) {
        nlohmann::ordered_json results = nlohmann::ordered_json::array();
        for (const auto& r : run.results)
            results.push_back({{"model", r.model_name}, {"rmse", r.rmse}, {"scored_days", r.scored_days}, {"empty", r.empty}});
        nlohmann::ordered_json failures = nlohmann::ordered_json::array();
        for (const auto& f : run.failures) failures.push_back({{"model", f.model}, {"kind", f.kind}, {"message", f.message}});
        runs.push_back({{"level", run.level},
                        {"seed", run.seed},
                        {"masked_days", run.masked.size() - run.masked.observed_count()},
                        {"results", results},
                        {"failures", failures}});
    }
    j["runs"] = runs;
    j["failures"] = report.failure_count();
    out << j.dump(2) << '\n';
}

}  // namespace sudr

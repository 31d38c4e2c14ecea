#include "sudr/cli/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sudr/data/jhu.hpp"
#include "sudr/data/manifest.hpp"
#include "sudr/data/prevalence.hpp"
#include "sudr/errors.hpp"
#include "sudr/experiment/artifacts.hpp"
#include "sudr/experiment/presets.hpp"
#include "sudr/experiment/reports.hpp"
#include "sudr/experiment/robustness.hpp"
#include "sudr/inference/sudr_fit.hpp"
#include "sudr/io/format.hpp"

namespace sudr::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kTrajectorySamples = 100;

int exit_code_for(const std::string& kind) {
    if (kind == "config_error" || kind == "domain_error") return kUsage;
    if (kind == "sampler_failed" || kind == "numerical_blowup" || kind == "gradient_failed" ||
        kind == "singular_system")
        return kNumerical;
    return kDataError;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    j["exit_code"] = code;
    err << j.dump() << '\n';
}

struct Options {
    std::string country;
    std::string config;
    std::string data;
    std::string jhu_dir;
    std::string out;
    std::uint64_t seed{1};
    int chains{4};
    int iters{2000};
    int warmup{1000};
    int degree{8};
    double alpha{0.01};
    double target_accept{0.8};
    std::vector<double> sparsity{0.0, 0.05, 0.10, 0.20};
    int replicates{1};
    std::vector<std::string> fits;
    std::string preset{"recovery"};
    int days{kPresetDays};
};

struct Flags {
    CLI::Option* chains{nullptr};
    CLI::Option* iters{nullptr};
    CLI::Option* warmup{nullptr};
    CLI::Option* degree{nullptr};
    CLI::Option* alpha{nullptr};
    CLI::Option* seed{nullptr};
    CLI::Option* target_accept{nullptr};
};

void add_data_flags(CLI::App* app, Options& o) {
    app->add_option("--country", o.country, "Country name as it appears in the JHU files");
    app->add_option("--config", o.config, "Country manifest (INI); the built-in study manifest otherwise");
    app->add_option("--data", o.data, "Observations CSV (date,country,active,prevalence,masked[,removed])");
    app->add_option("--jhu-dir", o.jhu_dir, "Directory holding the three JHU global time-series CSVs");
    app->add_option("--alpha", o.alpha, "Involved fraction alpha of the population");
}

void add_run_flags(CLI::App* app, Options& o, Flags& f) {
    f.seed = app->add_option("--seed", o.seed, "Run seed");
    f.chains = app->add_option("--chains", o.chains, "HMC chains")->check(CLI::PositiveNumber);
    f.iters = app->add_option("--iters", o.iters, "Iterations per chain, warmup included")->check(CLI::PositiveNumber);
    f.warmup = app->add_option("--warmup", o.warmup, "Warmup iterations per chain")->check(CLI::NonNegativeNumber);
    f.degree = app->add_option("--degree", o.degree, "Bernstein degree N")->check(CLI::NonNegativeNumber);
    f.target_accept = app->add_option("--target-accept", o.target_accept, "Dual-averaging acceptance target");
}

Manifest load_manifest(const Options& o) { return o.config.empty() ? Manifest::builtin() : Manifest::read(o.config); }

// Country entry with per-country overrides applied where the flag was not given.
HmcConfig hmc_settings(const Options& o, const Flags& f, const CountryEntry* entry) {
    HmcConfig h = SudrFitConfig::default_hmc();
    h.chains = o.chains;
    h.iters = o.iters;
    h.warmup = o.warmup;
    h.seed = o.seed;
    h.target_accept = o.target_accept;
    if (entry != nullptr) {
        if (entry->chains && f.chains->count() == 0) h.chains = *entry->chains;
        if (entry->iters && f.iters->count() == 0) h.iters = *entry->iters;
        if (entry->warmup && f.warmup->count() == 0) h.warmup = *entry->warmup;
        if (entry->seed && f.seed->count() == 0) h.seed = *entry->seed;
        if (entry->target_accept && f.target_accept->count() == 0) h.target_accept = *entry->target_accept;
    }
    if (h.warmup >= h.iters) throw ConfigError("--warmup must be smaller than --iters");
    return h;
}

struct LoadedData {
    ObservationSeries obs;
    std::optional<CountryEntry> entry;
};

LoadedData load_data(const Options& o, const Flags* f) {
    LoadedData d;
    if (!o.data.empty()) {
        d.obs = read_observations(o.data);
        if (!o.country.empty()) d.obs.country = o.country;
        return d;
    }
    if (o.country.empty()) throw ConfigError("give --data or --country");
    if (o.jhu_dir.empty()) throw ConfigError("--country needs --jhu-dir");
    const Manifest manifest = load_manifest(o);
    d.entry = manifest.find(o.country);
    const fs::path dir(o.jhu_dir);
    const JhuPaths paths{dir / "time_series_covid19_confirmed_global.csv",
                         dir / "time_series_covid19_recovered_global.csv",
                         dir / "time_series_covid19_deaths_global.csv"};
    const CountrySeries cs = parse_jhu(paths, d.entry->name, d.entry->window, d.entry->population);
    const double alpha = (f != nullptr && f->alpha != nullptr && f->alpha->count() > 0) ? o.alpha : d.entry->alpha;
    d.obs = country_observations(cs, PopulationScaling::make(d.entry->population, alpha));
    return d;
}

fs::path prepare_out(const std::string& out, const std::string& fallback) {
    fs::path dir = out.empty() ? fs::path(fallback) : fs::path(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("io_error", "cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("io_error", "cannot write " + path.string());
    writer(file);
    if (!file) throw DataError("io_error", "failed writing " + path.string());
}

std::string slug(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return s;
}

int cmd_fit(const Options& o, const Flags& f, std::ostream& out, std::ostream& err) {
    const LoadedData data = load_data(o, &f);
    SudrFitConfig config;
    config.degree = o.degree;
    if (data.entry && data.entry->degree && f.degree->count() == 0) config.degree = *data.entry->degree;
    config.hmc = hmc_settings(o, f, data.entry ? &*data.entry : nullptr);
    const fs::path dir = prepare_out(o.out, "fit_" + slug(data.obs.country));

    const SudrFit fit = fit_sudr(data.obs, config);
    const SampleTable table = SampleTable::from_fit(fit);
    const std::vector<SampledParams> draws = table.pooled();
    std::vector<std::size_t> all(draws.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const PosteriorTrajectories band = posterior_trajectories(draws, all, data.obs.size(), config.substeps);
    const PosteriorTrajectories chosen = posterior_trajectories(
        draws, choose_without_replacement(draws.size(), kTrajectorySamples, config.hmc.seed), data.obs.size(),
        config.substeps);

    write_file(dir / "observations.csv", [&](std::ostream& s) { write_observations(s, data.obs); });
    write_file(dir / "samples.csv", [&](std::ostream& s) { write_samples_csv(s, table); });
    write_file(dir / "summary.json", [&](std::ostream& s) { write_summary_json(s, fit, data.obs, config.hmc); });
    write_file(dir / "trajectories.csv", [&](std::ostream& s) { write_trajectories_csv(s, chosen, table); });
    write_file(dir / "band.csv", [&](std::ostream& s) { write_band_csv(s, band, data.obs); });

    out << "fit " << data.obs.country << ": max R-hat " << format_double(fit.summary.max_r_hat()) << ", min ESS "
        << format_double(fit.summary.min_ess()) << ", " << fit.chains.divergences() << " divergences -> "
        << dir.string() << '\n';
    if (!fit.summary.converged()) {
        write_error(err, "not_converged",
                    "max R-hat " + format_double(fit.summary.max_r_hat()) + ", min ESS " +
                        format_double(fit.summary.min_ess()) + "; diagnostics written to " + dir.string(),
                    kNotConverged);
        return kNotConverged;
    }
    return kOk;
}

// Observations of a fit directory, with the scaling recorded in its summary.
ObservationSeries fit_observations(const fs::path& dir, const Manifest* manifest) {
    const fs::path summary_path = dir / "summary.json";
    std::ifstream in(summary_path);
    if (!in) throw DataError("missing_artifact", "cannot open " + summary_path.string());
    nlohmann::json summary;
    try {
        in >> summary;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed_json", summary_path.string() + ": " + e.what());
    }
    if (!fs::exists(dir / "observations.csv"))
        throw DataError("missing_artifact", "cannot open " + (dir / "observations.csv").string());
    PopulationScaling scaling{summary.value("population", 1.0), summary.value("alpha", 1.0),
                              summary.value("effective_population", 1.0)};
    ObservationSeries obs = read_observations(dir / "observations.csv", &scaling);
    if (manifest != nullptr) {
        for (const auto& e : manifest->entries)
            if (e.name == obs.country) obs.scaling = PopulationScaling::make(e.population, scaling.alpha);
    }
    return obs;
}

int cmd_peak_report(const Options& o, std::ostream& out) {
    if (o.fits.empty()) throw ConfigError("give at least one --fit directory");
    std::optional<Manifest> manifest;
    if (!o.config.empty()) manifest = Manifest::read(o.config);
    std::vector<PeakReport> rows;
    for (const auto& f : o.fits) {
        const ObservationSeries obs = fit_observations(f, manifest ? &*manifest : nullptr);
        rows.push_back(peak_report(read_samples_csv(fs::path(f) / "samples.csv"), obs));
    }
    const fs::path dir = prepare_out(o.out, ".");
    write_file(dir / "peak_report.csv", [&](std::ostream& s) { write_peak_csv(s, rows); });
    write_file(dir / "peak_report.json", [&](std::ostream& s) { write_peak_json(s, rows); });
    out << "peak report for " << rows.size() << " fit(s) -> " << dir.string() << '\n';
    return kOk;
}

int cmd_beta_report(const Options& o, std::ostream& out) {
    if (o.fits.empty()) throw ConfigError("give at least one --fit directory");
    std::vector<BetaReport> rows;
    for (const auto& f : o.fits) {
        const ObservationSeries obs = fit_observations(f, nullptr);
        rows.push_back(beta_report(read_samples_csv(fs::path(f) / "samples.csv"), obs));
    }
    const fs::path dir = prepare_out(o.out, ".");
    write_file(dir / "beta_report.csv", [&](std::ostream& s) { write_beta_csv(s, rows); });
    write_file(dir / "beta_report.json", [&](std::ostream& s) { write_beta_json(s, rows); });
    out << "beta report for " << rows.size() << " fit(s) -> " << dir.string() << '\n';
    return kOk;
}

int cmd_robustness(const Options& o, const Flags& f, std::ostream& out, std::ostream& err) {
    const LoadedData data = load_data(o, &f);
    if (o.replicates < 1) throw ConfigError("--replicates must be >= 1");
    for (double level : o.sparsity)
        if (!(level >= 0.0 && level < 1.0)) throw ConfigError("sparsity levels must lie in [0, 1)");
    RobustnessConfig config;
    config.levels = o.sparsity;
    config.sudr.degree = o.degree;
    config.sudr.hmc = hmc_settings(o, f, nullptr);
    config.complex_sir.degree = o.degree;
    config.complex_sir.hmc = config.sudr.hmc;
    const fs::path dir = prepare_out(o.out, "robustness_" + slug(data.obs.country));

    data.obs.validate();
    RobustnessReport report;
    for (int r = 0; r < o.replicates; ++r) {
        config.seed = o.seed + static_cast<std::uint64_t>(r);
        RobustnessReport part = run_robustness(data.obs, config);
        for (auto& run : part.runs) {
            write_file(dir / ("backtest_" + format_double(run.level) + "_seed" + std::to_string(run.seed) + ".csv"),
                       [&](std::ostream& s) { write_backtest_csv(s, run); });
            report.runs.push_back(std::move(run));
        }
    }
    write_file(dir / "robustness_summary.json", [&](std::ostream& s) { write_robustness_summary(s, report); });
    out << "robustness: " << report.runs.size() << " run(s), " << report.failure_count() << " model failure(s) -> "
        << dir.string() << '\n';
    if (report.failure_count() > 0) {
        write_error(err, "partial_failure",
                    std::to_string(report.failure_count()) + " model fit(s) failed; see robustness_summary.json",
                    kPartial);
        return kPartial;
    }
    return kOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
    if (o.days < 2) throw ConfigError("--days must be >= 2");
    const SyntheticDataset ds = make_preset(o.preset, o.seed, o.days);
    const fs::path dir = prepare_out(o.out, "synth_" + o.preset);
    write_file(dir / "observations.csv", [&](std::ostream& s) { write_observations(s, ds.obs); });
    write_file(dir / "states.csv", [&](std::ostream& s) {
        s << "day,s,iu,id,r\n";
        for (Eigen::Index t = 0; t < ds.trajectory.states.rows(); ++t) {
            s << t;
            for (int c = 0; c < 4; ++c) s << ',' << format_double(ds.trajectory.states(t, c));
            s << '\n';
        }
    });
    write_file(dir / "truth.json", [&](std::ostream& s) {
        const ModelParams& p = ds.truth;
        nlohmann::ordered_json j;
        j["preset"] = o.preset;
        j["seed"] = o.seed;
        j["days"] = o.days;
        j["xi"] = std::vector<double>(p.contagion.coeffs.data(), p.contagion.coeffs.data() + p.contagion.coeffs.size());
        j["theta"] = p.theta;
        j["gamma"] = p.gamma;
        j["sigma"] = p.sigma;
        j["s0"] = p.y0.s;
        j["iu0"] = p.y0.i_u;
        j["id0"] = p.y0.i_d;
        j["r0"] = p.y0.r;
        s << j.dump(2) << '\n';
    });
    out << "synthetic " << o.preset << " dataset (seed " << o.seed << ") -> " << dir.string() << '\n';
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"SUDR compartmental model: fitting, reports and robustness backtests", "sudr"};
    app.require_subcommand(1);
    Options o;
    Flags fit_flags, robust_flags;

    CLI::App* fit = app.add_subcommand("fit", "Run HMC on one dataset and write samples, summary and bands");
    add_data_flags(fit, o);
    add_run_flags(fit, o, fit_flags);
    fit_flags.alpha = fit->get_option("--alpha");
    fit->add_option("--out", o.out, "Output directory");

    CLI::App* peak = app.add_subcommand("peak-report", "Undocumented vs documented peaks from fit directories");
    peak->add_option("--fit", o.fits, "Fit output directory (repeatable)")->required();
    peak->add_option("--config", o.config, "Manifest overriding the recorded population");
    peak->add_option("--out", o.out, "Output directory");

    CLI::App* beta = app.add_subcommand("beta-report", "Box statistics of the contagion rate at visited prevalence");
    beta->add_option("--fit", o.fits, "Fit output directory (repeatable)")->required();
    beta->add_option("--out", o.out, "Output directory");

    CLI::App* robust = app.add_subcommand("robustness", "Backtest four models under increasing sparsity");
    add_data_flags(robust, o);
    add_run_flags(robust, o, robust_flags);
    robust_flags.alpha = robust->get_option("--alpha");
    robust->add_option("--sparsity", o.sparsity, "Sparsity levels")->delimiter(',');
    robust->add_option("--replicates", o.replicates, "Mask/fit seeds seed..seed+k-1");
    robust->add_option("--out", o.out, "Output directory");

    CLI::App* synth = app.add_subcommand("synth", "Write a seed-fixed synthetic SUDR dataset");
    synth->add_option("--preset", o.preset, "Synthetic truth")->check(CLI::IsMember(preset_names()));
    synth->add_option("--seed", o.seed, "Noise seed");
    synth->add_option("--days", o.days, "Days to simulate");
    synth->add_option("--out", o.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage_error", e.what(), kUsage);
        return kUsage;
    }

    try {
        if (fit->parsed()) return cmd_fit(o, fit_flags, out, err);
        if (peak->parsed()) return cmd_peak_report(o, out);
        if (beta->parsed()) return cmd_beta_report(o, out);
        if (robust->parsed()) return cmd_robustness(o, robust_flags, out, err);
        if (synth->parsed()) return cmd_synth(o, out);
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        write_error(err, e.kind(), e.what(), code);
        return code;
    } catch (const std::exception& e) {
        write_error(err, "internal_error", e.what(), kInternal);
        return kInternal;
    }
    return kUsage;
}

}  // namespace sudr::cli

#include "sudr/experiment/artifacts.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <random>
#include <sstream>

#include "sudr/errors.hpp"
#include "sudr/io/format.hpp"

namespace sudr {

namespace {

const char* metric_name(MetricKind m) {
    switch (m) {
        case MetricKind::identity:
            return "identity";
        case MetricKind::diagonal:
            return "diagonal";
        case MetricKind::dense:
            return "dense";
    }
    return "identity";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

SampleTable SampleTable::from_fit(const SudrFit& fit) {
    SampleTable t;
    t.names = fit.names;
    t.degree = fit.degree;
    t.constrained = fit.constrained;
    for (const auto& c : fit.chains.chains) {
        t.log_post.push_back(c.log_density);
        t.divergent.push_back(c.divergent);
    }
    return t;
}

std::vector<SampledParams> SampleTable::pooled() const {
    std::vector<SampledParams> out;
    for (const auto& c : constrained)
        for (Eigen::Index i = 0; i < c.rows(); ++i) out.push_back(unflatten(c.row(i).transpose(), degree));
    return out;
}

int SampleTable::total_draws() const {
    int n = 0;
    for (const auto& c : constrained) n += static_cast<int>(c.rows());
    return n;
}

void write_samples_csv(std::ostream& out, const SampleTable& table) {
    out << "chain,iter,log_post,divergent";
    for (const auto& n : table.names) out << ',' << n;
    out << '\n';
    for (std::size_t c = 0; c < table.constrained.size(); ++c) {
        const Eigen::MatrixXd& m = table.constrained[c];
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            out << c << ',' << i + 1 << ',' << format_double(table.log_post[c][i]) << ','
                << (table.divergent[c][static_cast<std::size_t>(i)] ? 1 : 0);
            for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
            out << '\n';
        }
    }
}

SampleTable read_samples_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("missing_artifact", "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("malformed_csv", path.string() + ": empty file");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 5 || header[0] != "chain" || header[1] != "iter" || header[2] != "log_post" ||
        header[3] != "divergent")
        throw DataError("malformed_csv", path.string() + ":1: unexpected header");

    SampleTable t;
    t.names.assign(header.begin() + 4, header.end());
    const auto xi_count = std::count_if(t.names.begin(), t.names.end(), [](const std::string& n) { return n.rfind("xi_", 0) == 0; });
    t.degree = static_cast<int>(xi_count) - 1;
    if (t.degree < 0 || t.names != parameter_names(t.degree))
        throw DataError("malformed_csv", path.string() + ":1: unexpected parameter columns");

    std::vector<std::vector<Eigen::VectorXd>> rows;
    std::vector<std::vector<double>> lp;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (f.size() != header.size()) throw DataError("malformed_csv", where + ": wrong field count");
        try {
            const auto chain = static_cast<std::size_t>(std::stoul(f[0]));
            if (chain > rows.size()) throw DataError("malformed_csv", where + ": chains out of order");
            if (chain == rows.size()) {
                rows.emplace_back();
                lp.emplace_back();
                t.divergent.emplace_back();
            }
            lp[chain].push_back(std::stod(f[2]));
            t.divergent[chain].push_back(std::stoi(f[3]) != 0);
            Eigen::VectorXd v(static_cast<Eigen::Index>(t.names.size()));
            for (std::size_t j = 0; j < t.names.size(); ++j) v[static_cast<Eigen::Index>(j)] = std::stod(f[4 + j]);
            rows[chain].push_back(std::move(v));
        } catch (const std::invalid_argument&) {
            throw DataError("malformed_csv", where + ": bad number");
        } catch (const std::out_of_range&) {
            throw DataError("malformed_csv", where + ": bad number");
        }
    }
    if (rows.empty()) throw DataError("malformed_csv", path.string() + ": no draws");
    for (std::size_t c = 0; c < rows.size(); ++c) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows[c].size()), static_cast<Eigen::Index>(t.names.size()));
        for (std::size_t i = 0; i < rows[c].size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[c][i].transpose();
        t.constrained.push_back(std::move(m));
        t.log_post.push_back(Eigen::Map<Eigen::VectorXd>(lp[c].data(), static_cast<Eigen::Index>(lp[c].size())));
    }
    return t;
}

void write_summary_json(std::ostream& out, const SudrFit& fit, const ObservationSeries& obs, const HmcConfig& hmc) {
    nlohmann::ordered_json j;
    j["country"] = obs.country;
    j["days"] = obs.size();
    j["observed_days"] = obs.observed_count();
    if (!obs.dates.empty()) {
        j["start"] = obs.dates.front();
        j["end"] = obs.dates.back();
    }
    j["population"] = obs.scaling.w;
    j["alpha"] = obs.scaling.alpha;
    j["effective_population"] = obs.scaling.p;
    j["degree"] = fit.degree;
    j["hmc"] = {{"chains", hmc.chains},
                {"iters", hmc.iters},
                {"warmup", hmc.warmup},
                {"target_accept", hmc.target_accept},
                {"seed", hmc.seed},
                {"leapfrog_steps", hmc.leapfrog_steps},
                {"metric", metric_name(hmc.metric)}};
    j["converged"] = fit.summary.converged();
    j["max_r_hat"] = fit.summary.max_r_hat();
    j["min_ess"] = fit.summary.min_ess();
    j["divergences"] = fit.chains.divergences();
    nlohmann::ordered_json chains = nlohmann::ordered_json::array();
    for (const auto& c : fit.chains.chains)
        chains.push_back({{"seed", c.seed},
                          {"step_size", c.step_size},
                          {"accept_rate", c.accept_rate},
                          {"warmup_divergences", c.warmup_divergences}});
    j["chains"] = chains;
    nlohmann::ordered_json params = nlohmann::ordered_json::array();
    for (const auto& p : fit.summary.params)
        params.push_back({{"name", p.name},
                          {"mean", p.mean},
                          {"median", p.median},
                          {"q025", p.q025},
                          {"q975", p.q975},
                          {"r_hat", p.r_hat},
                          {"ess", p.ess}});
    j["parameters"] = params;
    out << j.dump(2) << '\n';
}

std::vector<std::size_t> choose_without_replacement(std::size_t n, std::size_t k, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    k = std::min(k, n);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

PosteriorTrajectories posterior_trajectories(const std::vector<SampledParams>& draws,
                                             const std::vector<std::size_t>& which, int days, int substeps) {
    PosteriorTrajectories out;
    std::vector<Eigen::VectorXd> iu, id;
    for (std::size_t w : which) {
        if (w >= draws.size()) throw DomainError("draw index out of range");
        try {
            const SudrTrajectory traj = integrate_sudr(draws[w].model(), days, substeps);
            iu.push_back(traj.states.col(1).tail(days));
            id.push_back(traj.states.col(2).tail(days));
            out.draw_index.push_back(w);
        } catch (const BlowupError&) {
            ++out.failures;
        }
    }
    out.undocumented.resize(static_cast<Eigen::Index>(iu.size()), days);
    out.documented.resize(static_cast<Eigen::Index>(id.size()), days);
    for (std::size_t r = 0; r < iu.size(); ++r) {
        out.undocumented.row(static_cast<Eigen::Index>(r)) = iu[r].transpose();
        out.documented.row(static_cast<Eigen::Index>(r)) = id[r].transpose();
    }
    return out;
}

void write_trajectories_csv(std::ostream& out, const PosteriorTrajectories& traj, const SampleTable& table) {
    const std::size_t per_chain = table.constrained.empty() ? 1 : static_cast<std::size_t>(table.constrained[0].rows());
    out << "sample,chain,iter,day,iu,id\n";
    for (Eigen::Index r = 0; r < traj.undocumented.rows(); ++r) {
        const std::size_t w = traj.draw_index[static_cast<std::size_t>(r)];
        for (Eigen::Index d = 0; d < traj.undocumented.cols(); ++d)
            out << r << ',' << w / per_chain << ',' << w % per_chain + 1 << ',' << d + 1 << ','
                << format_double(traj.undocumented(r, d)) << ',' << format_double(traj.documented(r, d)) << '\n';
    }
}

void write_band_csv(std::ostream& out, const PosteriorTrajectories& traj, const ObservationSeries& obs) {
    out << "day,observed,iu_q025,iu_median,iu_q975,id_q025,id_median,id_q975\n";
    const Eigen::Index days = traj.undocumented.cols();
    for (Eigen::Index d = 0; d < days; ++d) {
        out << d + 1 << ',';
        if (d < obs.size() && obs.is_present(static_cast<int>(d))) out << format_double(obs.y[d]);
        for (const Eigen::MatrixXd* m : {&traj.undocumented, &traj.documented}) {
            const Eigen::VectorXd col = m->col(d);
            const std::vector<double> v(col.data(), col.data() + col.size());
            for (double p : {0.025, 0.5, 0.975}) out << ',' << (v.empty() ? std::string() : format_double(quantile(v, p)));
        }
        out << '\n';
    }
}

}  // namespace sudr

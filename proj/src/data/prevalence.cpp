#include "sudr/data/prevalence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/tokenizer.hpp>

#include "sudr/errors.hpp"
#include "sudr/io/format.hpp"

namespace sudr {

bool ActiveSeries::any_floored() const { return std::find(floored.begin(), floored.end(), true) != floored.end(); }

ActiveSeries active_documented(const CountrySeries& cs) {
    ActiveSeries a;
    const Eigen::VectorXd raw = cs.confirmed - cs.recovered - cs.deaths;
    a.counts = raw.cwiseMax(0.0);
    a.floored.resize(static_cast<std::size_t>(raw.size()));
    for (Eigen::Index k = 0; k < raw.size(); ++k) a.floored[static_cast<std::size_t>(k)] = raw[k] < 0;
    return a;
}

ObservationSeries to_prevalence(const Eigen::VectorXd& active, const PopulationScaling& scaling) {
    if (!(scaling.p > 0)) throw DomainError("effective population must be positive");
    ObservationSeries obs = ObservationSeries::from_values(active / scaling.p, scaling);
    for (Eigen::Index k = 0; k < obs.y.size(); ++k) {
        if (obs.y[k] > 1.0)
            throw DataError("prevalence_above_one", "prevalence " + format_double(obs.y[k]) + " at day " +
                                                        std::to_string(k + 1) + " exceeds 1; alpha too small");
        if (obs.y[k] < 0.0) throw DataError("negative active count at day " + std::to_string(k + 1));
    }
    return obs;
}

ObservationSeries country_observations(const CountrySeries& cs, const PopulationScaling& scaling) {
    ObservationSeries obs = to_prevalence(active_documented(cs).counts, scaling);
    obs.country = cs.country;
    obs.removed = (cs.recovered + cs.deaths) / scaling.p;
    for (const auto& d : cs.dates) obs.dates.push_back(format_iso_date(d));
    return obs;
}

void write_observations(std::ostream& out, const ObservationSeries& obs) {
    const bool with_removed = obs.removed.size() == obs.y.size() && obs.y.size() > 0;
    out << "date,country,active,prevalence,masked" << (with_removed ? ",removed\n" : "\n");
    for (int k = 0; k < obs.size(); ++k) {
        const std::string date =
            static_cast<std::size_t>(k) < obs.dates.size() ? obs.dates[static_cast<std::size_t>(k)] : std::to_string(k + 1);
        out << date << ',' << obs.country << ',' << format_double(std::round(obs.y[k] * obs.scaling.p * 1e6) / 1e6)
            << ',' << format_double(obs.y[k]) << ',' << (obs.is_present(k) ? 0 : 1);
        if (with_removed) out << ',' << format_double(obs.removed[k]);
        out << '\n';
    }
}

void write_observations(const std::filesystem::path& path, const ObservationSeries& obs) {
    std::ofstream out(path);
    if (!out) throw DataError("io_error", "cannot write " + path.string());
    write_observations(out, obs);
}

ObservationSeries read_observations(const std::filesystem::path& path, const PopulationScaling* scaling) {
    std::ifstream in(path);
    if (!in) throw DataError("missing_file", "cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line.rfind("date,country,active,prevalence,masked", 0) != 0)
        throw DataError("malformed_csv", path.string() + ":1: unexpected header");
    const bool with_removed = line.rfind("date,country,active,prevalence,masked,removed", 0) == 0;
    const std::size_t width = with_removed ? 6 : 5;
    std::vector<double> active, prev, removed;
    std::vector<bool> present;
    ObservationSeries obs;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        boost::tokenizer<boost::escaped_list_separator<char>> tok(line);
        for (const auto& s : tok) f.push_back(s);
        if (f.size() != width)
            throw DataError("malformed_csv", path.string() + ":" + std::to_string(line_no) + ": expected " +
                                                 std::to_string(width) + " fields");
        try {
            obs.dates.push_back(f[0]);
            obs.country = f[1];
            active.push_back(std::stod(f[2]));
            prev.push_back(std::stod(f[3]));
            present.push_back(std::stoi(f[4]) == 0);
            if (with_removed) removed.push_back(std::stod(f[5]));
        } catch (const std::exception&) {
            throw DataError("malformed_csv", path.string() + ":" + std::to_string(line_no) + ": bad number");
        }
    }
    obs.y = Eigen::Map<Eigen::VectorXd>(prev.data(), static_cast<Eigen::Index>(prev.size()));
    obs.present = present;
    if (with_removed) obs.removed = Eigen::Map<Eigen::VectorXd>(removed.data(), static_cast<Eigen::Index>(removed.size()));
    if (scaling != nullptr) {
        obs.scaling = *scaling;
    } else {
        for (std::size_t k = 0; k < prev.size(); ++k) {
            if (prev[k] > 0) {
                const double p = active[k] / prev[k];
                obs.scaling = {p, 1.0, p};
                break;
            }
        }
    }
    obs.validate();
    return obs;
}

}  // namespace sudr

#include "sudr/data/manifest.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>

#include "sudr/errors.hpp"
#include "sudr/io/format.hpp"

namespace sudr {

namespace {

namespace pt = boost::property_tree;

CountryEntry entry(const std::string& name, double population, const std::string& start, const std::string& end) {
    CountryEntry e;
    e.name = name;
    e.population = population;
    e.window = {parse_date(start), parse_date(end)};
    return e;
}

template <typename T>
std::optional<T> optional_key(const pt::ptree& section, const std::string& key, const std::string& where) {
    const auto raw = section.get_optional<std::string>(key);
    if (!raw) return std::nullopt;
    const auto value = section.get_optional<T>(key);
    if (!value) throw ConfigError(where + ": bad value '" + *raw + "' for " + key);
    return *value;
}

}  // namespace

Manifest Manifest::builtin() {
    Manifest m;
    m.entries = {
        entry("Austria", 8847037, "2020-02-25", "2020-04-24"),
        entry("Belgium", 11422068, "2020-03-01", "2020-04-29"),
        entry("Denmark", 5797446, "2020-02-27", "2020-04-26"),
        entry("France", 66987244, "2020-02-25", "2020-04-24"),
        entry("Germany", 82927922, "2020-01-27", "2020-03-26"),
        entry("Italy", 60431283, "2020-02-20", "2020-04-19"),
        entry("Norway", 5314336, "2020-02-26", "2020-04-25"),
        entry("Spain", 46723749, "2020-02-25", "2020-04-24"),
        entry("Sweden", 10183175, "2020-02-25", "2020-04-24"),
        entry("Switzerland", 8516543, "2020-02-25", "2020-04-24"),
        entry("United Kingdom", 66488991, "2020-01-31", "2020-03-30"),
    };
    return m;
}

Manifest Manifest::parse(std::istream& in, const std::string& source) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
    Manifest m;
    for (const auto& [name, section] : tree) {
        const std::string where = source + " [" + name + "]";
        if (section.empty()) throw ConfigError(where + ": expected a section, got a bare key");
        CountryEntry e;
        e.name = name;
        const auto population = optional_key<double>(section, "population", where);
        const auto start = section.get_optional<std::string>("start");
        const auto end = section.get_optional<std::string>("end");
        if (!population || !start || !end) throw ConfigError(where + ": population, start and end are required");
        e.population = *population;
        if (!(e.population > 0)) throw ConfigError(where + ": population must be positive");
        try {
            e.window = {parse_date(*start), parse_date(*end)};
        } catch (const DataError& err) {
            throw ConfigError(where + ": " + err.what());
        }
        if (e.window.end < e.window.start) throw ConfigError(where + ": end precedes start");
        e.alpha = optional_key<double>(section, "alpha", where).value_or(0.01);
        if (!(e.alpha > 0 && e.alpha <= 1)) throw ConfigError(where + ": alpha must lie in (0, 1]");
        e.chains = optional_key<int>(section, "chains", where);
        e.iters = optional_key<int>(section, "iters", where);
        e.warmup = optional_key<int>(section, "warmup", where);
        e.degree = optional_key<int>(section, "degree", where);
        e.target_accept = optional_key<double>(section, "target_accept", where);
        e.seed = optional_key<std::uint64_t>(section, "seed", where);
        m.entries.push_back(std::move(e));
    }
    if (m.entries.empty()) throw ConfigError(source + ": manifest has no countries");
    return m;
}

Manifest Manifest::read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest " + path.string());
    return parse(in, path.string());
}

void Manifest::write(std::ostream& out) const {
    for (const auto& e : entries) {
        out << '[' << e.name << "]\n";
        out << "population = " << format_double(e.population) << '\n';
        out << "start = " << format_iso_date(e.window.start) << '\n';
        out << "end = " << format_iso_date(e.window.end) << '\n';
        out << "alpha = " << format_double(e.alpha) << '\n';
        if (e.chains) out << "chains = " << *e.chains << '\n';
        if (e.iters) out << "iters = " << *e.iters << '\n';
        if (e.warmup) out << "warmup = " << *e.warmup << '\n';
        if (e.degree) out << "degree = " << *e.degree << '\n';
        if (e.target_accept) out << "target_accept = " << format_double(*e.target_accept) << '\n';
        if (e.seed) out << "seed = " << *e.seed << '\n';
        out << '\n';
    }
}

const CountryEntry& Manifest::find(const std::string& country) const {
    for (const auto& e : entries)
        if (e.name == country) return e;
    throw DataError("missing_country", "country '" + country + "' is not in the manifest");
}

}  // namespace sudr

#include "sudr/data/jhu.hpp"

#include <boost/tokenizer.hpp>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sudr/errors.hpp"

namespace sudr {

namespace {

using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;

std::vector<std::string> split_csv(const std::string& line, const std::string& source, int line_no) {
    std::vector<std::string> fields;
    try {
        Tokenizer tok(line);
        for (const auto& f : tok) fields.push_back(f);
    } catch (const boost::escaped_list_error& e) {
        throw DataError("malformed_csv", source + ":" + std::to_string(line_no) + ": " + e.what());
    }
    return fields;
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

Date parse_date(const std::string& text) {
    int a = 0, b = 0, c = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d%c", &a, &b, &c, &tail) == 3) {
        const Date d{std::chrono::year{a}, std::chrono::month{static_cast<unsigned>(b)},
                     std::chrono::day{static_cast<unsigned>(c)}};
        if (d.ok()) return d;
    } else if (std::sscanf(text.c_str(), "%d/%d/%d%c", &a, &b, &c, &tail) == 3) {
        const int year = c < 100 ? 2000 + c : c;
        const Date d{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(a)},
                     std::chrono::day{static_cast<unsigned>(b)}};
        if (d.ok()) return d;
    }
    throw DataError("malformed_date", "cannot parse date '" + text + "'");
}

std::string format_jhu_date(const Date& d) {
    return std::to_string(static_cast<unsigned>(d.month())) + "/" + std::to_string(static_cast<unsigned>(d.day())) +
           "/" + std::to_string(static_cast<int>(d.year()) % 100);
}

std::string format_iso_date(const Date& d) {
    std::ostringstream os;
    os << std::setfill('0') << std::setw(4) << static_cast<int>(d.year()) << '-' << std::setw(2)
       << static_cast<unsigned>(d.month()) << '-' << std::setw(2) << static_cast<unsigned>(d.day());
    return os.str();
}

JhuTable JhuTable::read(std::istream& in, const std::string& source) {
    JhuTable t;
    std::string line;
    if (!std::getline(in, line)) throw DataError("malformed_csv", source + ": empty file");
    const auto header = split_csv(strip_cr(line), source, 1);
    if (header.size() < 5 || header[0] != "Province/State" || header[1] != "Country/Region")
        throw DataError("malformed_csv", source + ":1: header is not in the JHU wide layout");
    for (std::size_t j = 4; j < header.size(); ++j) {
        try {
            t.dates.push_back(parse_date(header[j]));
        } catch (const DataError&) {
            throw DataError("malformed_csv", source + ":1: bad date column '" + header[j] + "'");
        }
    }

    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv(line, source, line_no);
        if (fields.size() != header.size())
            throw DataError("malformed_csv", source + ":" + std::to_string(line_no) + ": expected " +
                                                 std::to_string(header.size()) + " fields, got " +
                                                 std::to_string(fields.size()));
        std::vector<double> values;
        for (std::size_t j = 4; j < fields.size(); ++j) {
            const std::string& f = fields[j];
            std::size_t used = 0;
            double v = 0;
            try {
                v = f.empty() ? 0.0 : std::stod(f, &used);
            } catch (const std::exception&) {
                used = std::string::npos;
            }
            if (!f.empty() && used != f.size())
                throw DataError("malformed_csv",
                                source + ":" + std::to_string(line_no) + ": non-numeric count '" + f + "'");
            values.push_back(v);
        }
        t.provinces.push_back(fields[0]);
        t.countries.push_back(fields[1]);
        t.coords.emplace_back(fields[2], fields[3]);
        rows.push_back(std::move(values));
    }
    t.counts.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.dates.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            t.counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return t;
}

JhuTable JhuTable::read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("missing_file", "cannot open " + path.string());
    return read(in, path.string());
}

Eigen::VectorXd JhuTable::country_total(const std::string& country) const {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(counts.cols());
    bool found = false;
    for (std::size_t i = 0; i < countries.size(); ++i) {
        if (countries[i] == country) {
            total += counts.row(static_cast<Eigen::Index>(i)).transpose();
            found = true;
        }
    }
    if (!found) throw DataError("missing_country", "country '" + country + "' not present");
    return total;
}

CountrySeries parse_jhu(const JhuPaths& paths, const std::string& country, const std::optional<DateWindow>& window,
                        double population) {
    const JhuTable conf = JhuTable::read(paths.confirmed);
    const JhuTable rec = JhuTable::read(paths.recovered);
    const JhuTable dead = JhuTable::read(paths.deaths);
    const Eigen::VectorXd totals[3] = {conf.country_total(country), rec.country_total(country),
                                       dead.country_total(country)};

    const Date first = window ? window->start : conf.dates.front();
    const Date last = window ? window->end : conf.dates.back();
    if (std::chrono::sys_days{last} < std::chrono::sys_days{first})
        throw DataError("window_out_of_range", "window ends before it starts");

    const auto slice = [&](const JhuTable& t, const Eigen::VectorXd& total, const char* name) {
        const auto begin = std::find(t.dates.begin(), t.dates.end(), first);
        const auto end = std::find(t.dates.begin(), t.dates.end(), last);
        if (begin == t.dates.end() || end == t.dates.end())
            throw DataError("window_out_of_range", std::string(name) + " file does not cover " +
                                                       format_jhu_date(first) + " to " + format_jhu_date(last));
        const auto i0 = static_cast<Eigen::Index>(begin - t.dates.begin());
        const auto n = static_cast<Eigen::Index>(end - begin) + 1;
        if (static_cast<std::chrono::sys_days>(last) - static_cast<std::chrono::sys_days>(first) !=
            std::chrono::days{n - 1})
            throw DataError("malformed_csv", std::string(name) + " file has non-consecutive date columns");
        return Eigen::VectorXd(total.segment(i0, n));
    };

    CountrySeries cs;
    cs.country = country;
    cs.population = population;
    cs.confirmed = slice(conf, totals[0], "confirmed");
    cs.recovered = slice(rec, totals[1], "recovered");
    cs.deaths = slice(dead, totals[2], "deaths");
    const auto i0 = std::find(conf.dates.begin(), conf.dates.end(), first) - conf.dates.begin();
    cs.dates.assign(conf.dates.begin() + i0, conf.dates.begin() + i0 + cs.confirmed.size());

    const auto flag = [&](const Eigen::VectorXd& v, const char* name) {
        for (Eigen::Index k = 1; k < v.size(); ++k)
            if (v[k] < v[k - 1])
                cs.quality_flags.push_back(std::string(name) + " " + format_jhu_date(cs.dates[static_cast<std::size_t>(k)]));
    };
    flag(cs.confirmed, "confirmed");
    flag(cs.recovered, "recovered");
    flag(cs.deaths, "deaths");
    return cs;
}

void write_jhu(const CountrySeries& cs, const JhuPaths& paths) {
    const auto write = [&](const std::filesystem::path& path, const Eigen::VectorXd& v) {
        std::ofstream out(path);
        if (!out) throw DataError("io_error", "cannot write " + path.string());
        out << "Province/State,Country/Region,Lat,Long";
        for (const auto& d : cs.dates) out << ',' << format_jhu_date(d);
        out << '\n' << ',' << quote_if_needed(cs.country) << ",0,0";
        for (Eigen::Index k = 0; k < v.size(); ++k) out << ',' << static_cast<long long>(std::llround(v[k]));
        out << '\n';
    };
    write(paths.confirmed, cs.confirmed);
    write(paths.recovered, cs.recovered);
    write(paths.deaths, cs.deaths);
}

}  // namespace sudr

#pragma once

#include <Eigen/Core>
#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sudr {

using Date = std::chrono::year_month_day;

/// Parses "M/D/YY" (JHU header style) or ISO "YYYY-MM-DD".
Date parse_date(const std::string& text);
/// JHU header style, e.g. 2/25/20.
std::string format_jhu_date(const Date& d);
std::string format_iso_date(const Date& d);

struct DateWindow {
    Date start;
    Date end;  ///< inclusive
};

struct JhuPaths {
    std::filesystem::path confirmed;
    std::filesystem::path recovered;
    std::filesystem::path deaths;
};

/// Cumulative JHU counts for one country, summed over its sub-regions.
struct CountrySeries {
    std::string country;
    double population{0};
    std::vector<Date> dates;
    Eigen::VectorXd confirmed;
    Eigen::VectorXd recovered;
    Eigen::VectorXd deaths;
    /// One entry per day where a cumulative series decreased, e.g.
    /// "confirmed 3/12/20". Values are kept as reported.
    std::vector<std::string> quality_flags;

    int size() const { return static_cast<int>(dates.size()); }
};

/// One wide-layout JHU file: per-row region names plus a count matrix.
struct JhuTable {
    std::vector<std::string> provinces;
    std::vector<std::string> countries;
    std::vector<std::pair<std::string, std::string>> coords;  ///< Lat/Long as written
    std::vector<Date> dates;
    Eigen::MatrixXd counts;  ///< rows = regions, cols = dates

    static JhuTable read(std::istream& in, const std::string& source = "<stream>");
    static JhuTable read(const std::filesystem::path& path);

    /// Column-wise sum over every row whose Country/Region matches.
    Eigen::VectorXd country_total(const std::string& country) const;
};

/// Reads the three files, sums the country's sub-regions and slices the
/// window (whole span when absent). Throws DataError with kinds
/// missing_country, malformed_csv, window_out_of_range.
CountrySeries parse_jhu(const JhuPaths& paths, const std::string& country,
                        const std::optional<DateWindow>& window = std::nullopt, double population = 0);

/// Writes the three series back in the wide layout, one row per file.
void write_jhu(const CountrySeries& cs, const JhuPaths& paths);

}  // namespace sudr

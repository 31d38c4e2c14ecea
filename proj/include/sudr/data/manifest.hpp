#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sudr/data/jhu.hpp"

namespace sudr {

/// One country's study settings. The optional fields override the run
/// defaults for that country only.
struct CountryEntry {
    std::string name;
    double population{0};
    DateWindow window{};
    double alpha{0.01};
    std::optional<int> chains;
    std::optional<int> iters;
    std::optional<int> warmup;
    std::optional<int> degree;
    std::optional<double> target_accept;
    std::optional<std::uint64_t> seed;
};

/// Country -> population, window and alpha, stored as INI with one section
/// per country:
///
///     [Austria]
///     population = 8847037
///     start = 2020-02-25
///     end = 2020-04-24
///     alpha = 0.01
///
/// Dates accept ISO or M/D/YY.
struct Manifest {
    std::vector<CountryEntry> entries;

    /// The eleven European study countries with their 60-day windows.
    static Manifest builtin();
    static Manifest parse(std::istream& in, const std::string& source = "<stream>");
    static Manifest read(const std::filesystem::path& path);
    void write(std::ostream& out) const;

    /// Throws DataError("missing_country") when absent.
    const CountryEntry& find(const std::string& country) const;
};

}  // namespace sudr

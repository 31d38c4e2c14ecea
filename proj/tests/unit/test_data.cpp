#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sudr/core/integrator.hpp"
#include "sudr/data/jhu.hpp"
#include "sudr/data/manifest.hpp"
#include "sudr/data/masking.hpp"
#include "sudr/data/prevalence.hpp"
#include "sudr/data/synthetic.hpp"
#include "sudr/errors.hpp"

using namespace sudr;
namespace fs = std::filesystem;

namespace {

const fs::path kData = SUDR_TEST_DATA_DIR;

JhuPaths toy_paths(const fs::path& dir = kData / "jhu") {
    return {dir / "time_series_covid19_confirmed_global.csv", dir / "time_series_covid19_recovered_global.csv",
            dir / "time_series_covid19_deaths_global.csv"};
}

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "none";
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("sudr_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ObservationSeries ramp(int days) {
    Eigen::VectorXd y(days);
    for (int k = 0; k < days; ++k) y[k] = 0.001 * (k + 1);
    return ObservationSeries::from_values(y, PopulationScaling::make(1e6, 0.01));
}

}  // namespace

TEST_CASE("dates: both layouts parse to the same day") {
    CHECK(parse_date("3/1/20") == parse_date("2020-03-01"));
    CHECK(format_jhu_date(parse_date("2020-12-31")) == "12/31/20");
    CHECK(format_iso_date(parse_date("2/9/20")) == "2020-02-09");
    CHECK(kind_of([] { parse_date("2020-13-01"); }) == "malformed_date");
    CHECK(kind_of([] { parse_date("yesterday"); }) == "malformed_date");
}

TEST_CASE("jhu: sums provinces and slices the window") {
    const DateWindow window{parse_date("2020-03-03"), parse_date("2020-04-11")};
    const CountrySeries cs = parse_jhu(toy_paths(), "Testland", window, 1e6);
    REQUIRE(cs.size() == 40);
    CHECK(cs.dates.front() == parse_date("2020-03-03"));
    CHECK(cs.dates.back() == parse_date("2020-04-11"));
    // North + South read off the toy files by hand
    CHECK(cs.confirmed[0] == 31);
    CHECK(cs.recovered[0] == 10);
    CHECK(cs.deaths[0] == 1);
    CHECK(cs.confirmed[27] == 1852);
    CHECK(cs.confirmed[28] == 1822);
    CHECK(cs.confirmed[39] == 1992);
    CHECK(cs.recovered[39] == 1585);
    CHECK(cs.deaths[39] == 96);
    // the reporting correction is flagged but kept
    REQUIRE(cs.quality_flags.size() == 1);
    CHECK(cs.quality_flags[0] == "confirmed 3/31/20");

    const CountrySeries whole = parse_jhu(toy_paths(), "Testland");
    CHECK(whole.size() == 45);
    CHECK(whole.confirmed[0] == 18);
}

TEST_CASE("jhu: error kinds") {
    CHECK(kind_of([] { parse_jhu(toy_paths(), "Atlantis"); }) == "missing_country");
    CHECK(kind_of([] { parse_jhu(toy_paths("/nonexistent"), "Testland"); }) == "missing_file");
    CHECK(kind_of([] {
              parse_jhu(toy_paths(), "Testland", DateWindow{parse_date("2020-02-01"), parse_date("2020-03-10")});
          }) == "window_out_of_range");
    CHECK(kind_of([] {
              parse_jhu(toy_paths(), "Testland", DateWindow{parse_date("2020-03-10"), parse_date("2020-03-01")});
          }) == "window_out_of_range");

    std::istringstream bad_header("Country,Lat,Long,3/1/20\nX,0,0,1\n");
    CHECK(kind_of([&] { JhuTable::read(bad_header); }) == "malformed_csv");
    std::istringstream short_row("Province/State,Country/Region,Lat,Long,3/1/20,3/2/20\n,X,0,0,1\n");
    CHECK(kind_of([&] { JhuTable::read(short_row); }) == "malformed_csv");
    std::istringstream bad_count("Province/State,Country/Region,Lat,Long,3/1/20\n,X,0,0,many\n");
    CHECK(kind_of([&] { JhuTable::read(bad_count); }) == "malformed_csv");
}

TEST_CASE("jhu: quoted names and country totals") {
    std::istringstream in(
        "Province/State,Country/Region,Lat,Long,3/1/20,3/2/20\n"
        "\"Hubei, North\",Land,0,0,1,2\n"
        ",Land,0,0,10,20\n"
        ",\"Korea, South\",0,0,5,6\n");
    const JhuTable t = JhuTable::read(in);
    CHECK(t.countries.size() == 3);
    CHECK(t.provinces[0] == "Hubei, North");
    CHECK(t.country_total("Land")[1] == 22);
    CHECK(t.country_total("Korea, South")[0] == 5);
}

TEST_CASE("jhu: write and re-read round trip") {
    const CountrySeries cs = parse_jhu(toy_paths(), "Otherland");
    const fs::path dir = scratch_dir("jhu_roundtrip");
    write_jhu(cs, toy_paths(dir));
    const CountrySeries back = parse_jhu(toy_paths(dir), "Otherland");
    CHECK(back.dates == cs.dates);
    CHECK(back.confirmed == cs.confirmed);
    CHECK(back.recovered == cs.recovered);
    CHECK(back.deaths == cs.deaths);
    fs::remove_all(dir);
}

TEST_CASE("prevalence: active counts over alpha W") {
    const DateWindow window{parse_date("2020-03-03"), parse_date("2020-04-11")};
    const CountrySeries cs = parse_jhu(toy_paths(), "Testland", window, 1e6);
    const ObservationSeries obs = country_observations(cs, PopulationScaling::make(1e6, 0.01));
    REQUIRE(obs.size() == 40);
    CHECK(obs.scaling.p == doctest::Approx(1e4));
    CHECK(obs.y[0] == doctest::Approx((31.0 - 10.0 - 1.0) / 1e4));
    CHECK(obs.y[39] == doctest::Approx((1992.0 - 1585.0 - 96.0) / 1e4));
    CHECK(obs.removed[0] == doctest::Approx(11.0 / 1e4));
    CHECK(obs.dates.front() == "2020-03-03");
    CHECK(obs.observed_count() == 40);

    CountrySeries neg = cs;
    neg.recovered[5] = neg.confirmed[5] + 10;
    const ActiveSeries a = active_documented(neg);
    CHECK(a.counts[5] == 0.0);
    CHECK(a.floored[5]);
    CHECK(a.any_floored());

    CHECK(kind_of([&] { country_observations(cs, PopulationScaling::make(1e6, 1e-5)); }) == "prevalence_above_one");
}

TEST_CASE("prevalence: observation table round trip keeps mask and removals") {
    ObservationSeries obs = mask_sparsity(ramp(12), 0.25, 3);
    obs.country = "Ramp";
    obs.removed = Eigen::VectorXd::LinSpaced(12, 0.0, 0.011);
    const fs::path dir = scratch_dir("obs_roundtrip");
    write_observations(dir / "obs.csv", obs);
    const ObservationSeries back = read_observations(dir / "obs.csv", &obs.scaling);
    CHECK(back.y == obs.y);
    CHECK(back.present == obs.present);
    CHECK(back.removed == obs.removed);
    CHECK(back.country == "Ramp");

    // without a scaling the denominator is recovered from active / prevalence
    const ObservationSeries inferred = read_observations(dir / "obs.csv");
    CHECK(inferred.scaling.p == doctest::Approx(obs.scaling.p));

    std::ofstream(dir / "bad.csv") << "when,where\n1,2\n";
    CHECK(kind_of([&] { read_observations(dir / "bad.csv"); }) == "malformed_csv");
    CHECK(kind_of([&] { read_observations(dir / "absent.csv"); }) == "missing_file");
    fs::remove_all(dir);
}

TEST_CASE("masking: count, day one and nesting") {
    const ObservationSeries obs = ramp(60);
    for (double f : {0.0, 0.05, 0.1, 0.25, 0.5}) {
        const ObservationSeries m = mask_sparsity(obs, f, 42);
        CHECK(m.observed_count() == 60 - static_cast<int>(std::floor(f * 60 + 1e-9)));
        CHECK(m.is_present(0));
        CHECK(m.y == obs.y);
    }
    // one seed across levels gives nested masks
    const ObservationSeries low = mask_sparsity(obs, 0.1, 7);
    const ObservationSeries high = mask_sparsity(obs, 0.5, 7);
    for (int k = 0; k < 60; ++k)
        if (!low.is_present(k)) CHECK_FALSE(high.is_present(k));

    CHECK(mask_sparsity(obs, 0.25, 9).present == mask_sparsity(obs, 0.25, 9).present);
    CHECK(mask_sparsity(obs, 0.25, 9).present != mask_sparsity(obs, 0.25, 10).present);
    CHECK_THROWS_AS(mask_sparsity(obs, 1.0, 1), DomainError);
    CHECK_THROWS_AS(mask_sparsity(obs, -0.1, 1), DomainError);
}

TEST_CASE("manifest: builtin table and INI parsing") {
    const Manifest builtin = Manifest::builtin();
    CHECK(builtin.entries.size() == 11);
    const CountryEntry& austria = builtin.find("Austria");
    CHECK(austria.population == 8847037);
    CHECK(austria.window.start == parse_date("2020-02-25"));
    CHECK(austria.window.end == parse_date("2020-04-24"));
    CHECK(kind_of([&] { builtin.find("Atlantis"); }) == "missing_country");

    const Manifest toy = Manifest::read(kData / "manifest.ini");
    REQUIRE(toy.entries.size() == 2);
    const CountryEntry& other = toy.find("Otherland");
    CHECK(other.alpha == doctest::Approx(0.02));
    CHECK(other.window.start == parse_date("2020-03-01"));
    CHECK(other.chains == 2);
    CHECK(other.iters == 300);
    CHECK_FALSE(toy.find("Testland").chains.has_value());

    std::ostringstream text;
    toy.write(text);
    std::istringstream again(text.str());
    const Manifest back = Manifest::parse(again);
    CHECK(back.find("Otherland").warmup == 150);
    CHECK(back.find("Testland").window.end == parse_date("2020-04-11"));

    std::istringstream missing("[X]\npopulation = 10\n");
    CHECK_THROWS_AS(Manifest::parse(missing), ConfigError);
    std::istringstream bad_alpha("[X]\npopulation = 10\nstart = 2020-01-01\nend = 2020-02-01\nalpha = 2\n");
    CHECK_THROWS_AS(Manifest::parse(bad_alpha), ConfigError);
    std::istringstream reversed("[X]\npopulation = 10\nstart = 2020-03-01\nend = 2020-02-01\n");
    CHECK_THROWS_AS(Manifest::parse(reversed), ConfigError);
}

TEST_CASE("synthetic: noiseless data equals the mean field") {
    ModelParams truth;
    truth.contagion.coeffs = Eigen::Vector3d(5.0, 4.0, 3.0);
    truth.theta = 0.8;
    truth.gamma = 1.0;
    truth.sigma = 0.0;
    truth.y0 = {0.6, 1e-3, 0.0, 0.0};
    const SyntheticDataset ds = synthesize(truth, 30, PopulationScaling::make(1e6, 1.0), 1);
    CHECK((ds.obs.y - mean_field_prevalence(truth, 30)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(ds.obs.removed == ds.removed_documented);

    // cumulative removals grow by gamma times the documented prevalence
    const Eigen::VectorXd id = ds.trajectory.states.col(2);
    double prev = 0.0;
    for (int t = 1; t <= 30; ++t) {
        const double step = ds.removed_documented[t - 1] - prev;
        CHECK(step == doctest::Approx(truth.gamma * 0.5 * (id[t - 1] + id[t])).epsilon(0.02));
        prev = ds.removed_documented[t - 1];
    }

    truth.sigma = 5e-4;
    const SyntheticDataset a = synthesize(truth, 30, PopulationScaling::make(1e6, 1.0), 7);
    const SyntheticDataset b = synthesize(truth, 30, PopulationScaling::make(1e6, 1.0), 7);
    const SyntheticDataset c = synthesize(truth, 30, PopulationScaling::make(1e6, 1.0), 8);
    CHECK(a.obs.y == b.obs.y);
    CHECK(a.obs.y != c.obs.y);
    CHECK((a.obs.y - ds.obs.y).cwiseAbs().maxCoeff() < 5 * 5e-4);
    CHECK(a.obs.y.minCoeff() >= 0.0);
}

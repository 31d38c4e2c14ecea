#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sudr/baselines/backtest.hpp"
#include "sudr/baselines/complex_sir.hpp"
#include "sudr/baselines/ridge.hpp"
#include "sudr/baselines/sir.hpp"
#include "sudr/errors.hpp"

using namespace sudr;

namespace {

struct SirSeries {
    ObservationSeries obs;
    Eigen::VectorXd removed;
};

// Independent discrete SIR generator with per-day rates.
SirSeries discrete_sir(double s, double i, double r, const std::function<double(int)>& beta, double gamma, int days) {
    Eigen::VectorXd y(days), rem(days);
    for (int t = 0; t < days; ++t) {
        y[t] = i;
        rem[t] = r;
        const double inf = beta(t) * s * i;
        const double out = gamma * i;
        s -= inf;
        i += inf - out;
        r += out;
    }
    SirSeries d{ObservationSeries::from_values(y, PopulationScaling::make(1e6, 1.0)), rem};
    d.obs.removed = rem;
    return d;
}

double rmse_from_day_two(const Eigen::VectorXd& pred, const Eigen::VectorXd& obs) {
    return std::sqrt((pred.tail(obs.size() - 1) - obs.tail(obs.size() - 1)).squaredNorm() / (obs.size() - 1));
}

}  // namespace

TEST_CASE("ridge: recovers a noiseless AR(1)") {
    Eigen::VectorXd y(30);
    y[0] = 5.0;
    for (int t = 1; t < 30; ++t) y[t] = 0.1 + 0.9 * y[t - 1];
    const Eigen::VectorXd c = ridge_fit(y, 1, 0.0);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(c[1] == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(ridge_predict(c, {1.0, 2.0}) == doctest::Approx(0.1 + 0.9 * 2.0));
}

TEST_CASE("ridge: hand-solved normal equations") {
    Eigen::VectorXd y(6);
    y << 1, 2, 4, 3, 5, 4;
    // [[4, 14, 10], [14, 54.5, 37], [10, 37, 30.5]] c = [16, 55, 42]
    const Eigen::VectorXd c = ridge_fit(y, 2, 0.5);
    CHECK(c[0] == doctest::Approx(141.0 / 35.0).epsilon(1e-12));
    CHECK(c[1] == doctest::Approx(-38.0 / 105.0).epsilon(1e-12));
    CHECK(c[2] == doctest::Approx(52.0 / 105.0).epsilon(1e-12));
}

TEST_CASE("ridge: heavy penalty leaves the target mean") {
    Eigen::VectorXd y(8);
    y << 3, 1, 4, 1, 5, 9, 2, 6;
    const Eigen::VectorXd c = ridge_fit(y, 2, 1e12);
    CHECK(std::abs(c[1]) < 1e-9);
    CHECK(std::abs(c[2]) < 1e-9);
    CHECK(c[0] == doctest::Approx(y.tail(6).mean()).epsilon(1e-9));

    double previous = std::numeric_limits<double>::infinity();
    for (double lambda : {0.0, 0.1, 1.0, 10.0, 100.0}) {
        const double norm = ridge_fit(y, 2, lambda).tail(2).norm();
        CHECK(norm <= previous + 1e-12);
        previous = norm;
    }
}

TEST_CASE("ridge: masking and degenerate inputs") {
    Eigen::VectorXd y(10);
    y << 1.0, 1.5, 1.2, 1.8, 1.1, 2.0, 1.6, 1.9, 1.4, 2.2;
    std::vector<bool> present(10, true);
    present[9] = false;
    const Eigen::VectorXd masked = ridge_fit(y, present, 2, 0.1);
    const Eigen::VectorXd truncated = ridge_fit(Eigen::VectorXd(y.head(9)), 2, 0.1);
    CHECK((masked - truncated).norm() < 1e-12);

    CHECK_THROWS_AS(ridge_fit(Eigen::VectorXd(y.head(3)), 2, 0.1), InsufficientDataError);
    CHECK_THROWS_AS(ridge_fit(Eigen::VectorXd::Constant(10, 2.0), 2, 0.0), SingularSystemError);
    // a constant series with any penalty is pure intercept
    const Eigen::VectorXd flat = ridge_fit(Eigen::VectorXd::Constant(10, 2.0), 2, 0.03);
    CHECK(flat[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(flat[1]) < 1e-12);
}

TEST_CASE("sir: exact discrete data gives exact rates") {
    const SirSeries d = discrete_sir(0.98, 0.01, 0.01, [](int) { return 0.3; }, 0.1, 40);
    const RateSeries rates = estimate_rate_series(d.obs, d.removed);
    CHECK(rates.size() == 39);
    CHECK(rates.valid_count() == 39);
    for (int k = 0; k < rates.size(); ++k) {
        CHECK(rates.beta[k] == doctest::Approx(0.3).epsilon(1e-9));
        CHECK(rates.gamma[k] == doctest::Approx(0.1).epsilon(1e-9));
    }
    const SirRates fit = fit_constant_sir(d.obs, d.removed);
    CHECK(fit.beta == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(fit.gamma == doctest::Approx(0.1).epsilon(1e-9));

    const Eigen::MatrixXd path = predict_constant_sir(fit, documented_start(d.obs, d.removed), 39);
    CHECK(path.rows() == 40);
    CHECK((path.col(1) - d.obs.y).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((path.col(2) - d.removed).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("sir: flat prevalence and removals give zero rates") {
    ObservationSeries obs = ObservationSeries::from_values(Eigen::VectorXd::Constant(10, 0.05));
    const Eigen::VectorXd removed = Eigen::VectorXd::Constant(10, 0.02);
    const SirRates fit = fit_constant_sir(obs, removed);
    CHECK(fit.beta == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.gamma == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sir: noisy data stays near the truth") {
    SirSeries d = discrete_sir(0.95, 0.03, 0.02, [](int) { return 0.25; }, 0.08, 40);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 40; ++t) d.obs.y[t] *= 1.0 + 1e-4 * n(rng);
    const SirRates fit = fit_constant_sir(d.obs, d.removed);
    CHECK(fit.beta == doctest::Approx(0.25).epsilon(0.1));
    CHECK(fit.gamma == doctest::Approx(0.08).epsilon(0.1));
}

TEST_CASE("sir: masked days break pairs and insufficient data throws") {
    SirSeries d = discrete_sir(0.98, 0.01, 0.01, [](int) { return 0.3; }, 0.1, 10);
    d.obs.present[4] = false;
    const RateSeries rates = estimate_rate_series(d.obs, d.removed);
    CHECK_FALSE(rates.present[3]);
    CHECK_FALSE(rates.present[4]);
    CHECK(rates.beta[3] == 0.0);
    CHECK(rates.valid_count() == 7);

    for (int k = 1; k < 10; k += 2) d.obs.present[static_cast<std::size_t>(k)] = false;
    d.obs.present[4] = true;
    CHECK_THROWS_AS(estimate_rate_series(d.obs, d.removed), InsufficientDataError);
    CHECK_THROWS_AS(fit_constant_sir(d.obs, d.removed), InsufficientDataError);
}

TEST_CASE("sir: stepping outside the unit box is a blowup") {
    const SirState<double> y0{0.9, 0.05, 0.05};
    CHECK_THROWS_AS(predict_constant_sir({50.0, 0.1}, y0, 10), BlowupError);
    const Eigen::MatrixXd zero = predict_constant_sir({0.3, 0.1}, y0, 0);
    REQUIRE(zero.rows() == 1);
    CHECK(zero(0, 1) == 0.05);
}

TEST_CASE("td-sir: constant rates reduce to the constant model") {
    const SirSeries d = discrete_sir(0.97, 0.02, 0.01, [](int) { return 0.2; }, 0.05, 30);
    const TimeDependentSir td = fit_time_dependent_sir(d.obs, d.removed);
    const SirState<double> y0 = documented_start(d.obs, d.removed);
    const Eigen::MatrixXd a = predict_time_dependent_sir(td, y0, 29);
    const Eigen::MatrixXd b = predict_constant_sir(fit_constant_sir(d.obs, d.removed), y0, 29);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);

    const Eigen::MatrixXd zero = predict_time_dependent_sir(td, y0, 0);
    REQUIRE(zero.rows() == 1);
    CHECK(zero(0, 1) == y0.i);
}

TEST_CASE("td-sir: tracks a decaying contact rate better than constant SIR") {
    const auto beta = [](int t) { return 0.4 * std::pow(0.95, t); };
    const SirSeries d = discrete_sir(0.97, 0.02, 0.01, beta, 0.1, 45);
    const TimeDependentSir td = fit_time_dependent_sir(d.obs, d.removed);
    for (int k = 0; k < td.rates.size(); ++k) CHECK(td.rates.beta[k] == doctest::Approx(beta(k)).epsilon(0.05));

    const SirState<double> y0 = documented_start(d.obs, d.removed);
    const double td_err = rmse_from_day_two(predict_time_dependent_sir(td, y0, 44).col(1), d.obs.y);
    const double sir_err =
        rmse_from_day_two(predict_constant_sir(fit_constant_sir(d.obs, d.removed), y0, 44).col(1), d.obs.y);
    CHECK(td_err < sir_err);
}

TEST_CASE("backtest: hand-computed RMSE and masking") {
    ObservationSeries obs = ObservationSeries::from_values(Eigen::Vector3d(0.1, 0.2, 0.5));
    const Eigen::Vector3d pred(0.4, 0.2, 0.3);
    // day 1 is not scored
    const BacktestResult r = backtest("m", pred, obs);
    CHECK(r.rmse == doctest::Approx(std::sqrt(0.04 / 2.0)).epsilon(1e-12));
    CHECK(r.scored_days == 2);
    CHECK(r.model_name == "m");

    obs.present[2] = false;
    const BacktestResult masked = backtest("m", pred, obs);
    CHECK(masked.rmse == doctest::Approx(0.0));
    CHECK(masked.scored_days == 1);

    obs.present[1] = false;
    const BacktestResult empty = backtest("m", pred, obs);
    CHECK(empty.empty);
    CHECK(empty.rmse == 0.0);

    CHECK_THROWS_AS(backtest("m", Eigen::Vector2d(0.1, 0.2), obs), DomainError);
}

TEST_CASE("backtest: the generator scores at the noise level") {
    const SirSeries d = discrete_sir(0.95, 0.03, 0.02, [](int) { return 0.25; }, 0.08, 60);
    ObservationSeries noisy = d.obs;
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n(0.0, 1e-3);
    for (int t = 0; t < 60; ++t) noisy.y[t] += n(rng);
    const BacktestResult r = backtest("truth", d.obs.y, noisy);
    CHECK(r.rmse < 1.3e-3);
    CHECK(r.rmse > 0.7e-3);
}

TEST_CASE("complex-sir: degree zero is the constant-rate SIR ODE") {
    ComplexSirParams p;
    p.mu_xi = 0.3;
    p.delta = Eigen::VectorXd::Constant(1, 0.2);
    p.gamma = 0.2;
    const SirState<double> y0{0.9, 0.05, 0.05};
    const Eigen::VectorXd i = predict_complex_sir(p, y0, 30);
    REQUIRE(i.size() == 31);
    const std::array<double, 4> start{0.9, 0.05, 0.0, 0.05};
    const Eigen::VectorXd xi = Eigen::VectorXd::Constant(1, 0.5);
    const auto coarse = oracle::euler_sudr(start, xi, 0.0, 0.2, 30, 2e-5);
    const auto fine = oracle::euler_sudr(start, xi, 0.0, 0.2, 30, 1e-5);
    for (int t = 0; t <= 30; ++t) CHECK(std::abs(i[t] - (2.0 * fine[t][1] - coarse[t][1])) < 1e-8);
    CHECK(predict_complex_sir(p, y0, 0).size() == 1);
}

TEST_CASE("complex-sir: transforms and gradient") {
    const PriorSpec spec{};
    ComplexSirParams p;
    p.mu_xi = 0.2;
    p.delta = Eigen::Vector3d(0.3, 0.1, 0.05);
    p.gamma = spec.mu_gamma + 0.1;
    p.sigma = 2e-3;
    const Eigen::VectorXd z = complex_sir_to_unconstrained(p, spec);
    REQUIRE(z.size() == complex_sir_dimension(2));
    const ComplexSirParams back = complex_sir_from_unconstrained(z, spec);
    CHECK(back.mu_xi == doctest::Approx(p.mu_xi).epsilon(1e-12));
    CHECK((back.delta - p.delta).norm() < 1e-12);
    CHECK(back.gamma == doctest::Approx(p.gamma).epsilon(1e-12));
    CHECK(back.sigma == doctest::Approx(p.sigma).epsilon(1e-12));
    CHECK(complex_sir_names(2).size() == 9);

    const SirState<double> y0{0.9, 0.05, 0.05};
    Eigen::VectorXd truth = predict_complex_sir(p, y0, 29);
    ObservationSeries obs = ObservationSeries::from_values(truth);
    obs.present[7] = false;
    const auto f = [&](const Eigen::VectorXd& x) { return complex_sir_log_posterior(x, obs, y0, spec); };
    const Eigen::VectorXd g = complex_sir_grad_log_posterior(z, obs, y0, spec);
    for (int k = 0; k < z.size(); ++k) {
        const double fd = oracle::central5(f, z, k, 1e-4);
        CHECK(g[k] == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
    }
}

TEST_CASE("complex-sir: short fit reproduces its generator") {
    ComplexSirParams p;
    p.mu_xi = 0.2;
    p.delta = Eigen::Vector2d(0.3, 0.1);
    p.gamma = 0.2;
    const SirState<double> y0{0.9, 0.05, 0.05};
    const Eigen::VectorXd truth = predict_complex_sir(p, y0, 29);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1e-3);
    Eigen::VectorXd y = truth;
    for (Eigen::Index k = 1; k < y.size(); ++k) y[k] += n(rng);
    ObservationSeries obs = ObservationSeries::from_values(y);
    Eigen::VectorXd removed = Eigen::VectorXd::Zero(30);
    removed[0] = 0.05;

    ComplexSirConfig cfg;
    cfg.degree = 1;
    cfg.hmc.chains = 2;
    cfg.hmc.iters = 300;
    cfg.hmc.warmup = 150;
    cfg.hmc.seed = 9;
    cfg.hmc.parallel = false;
    const ComplexSirFit fit = fit_complex_sir(obs, removed, cfg);
    CHECK(fit.y0.i == doctest::Approx(y[0]));
    CHECK(fit.y0.r == 0.05);
    const Eigen::VectorXd pred = predict_complex_sir(fit.posterior_mean(), fit.y0, 29);
    CHECK(rmse_from_day_two(pred, truth) < 1e-3);
}

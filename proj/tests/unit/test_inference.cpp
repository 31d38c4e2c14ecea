#include <doctest.h>

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sudr/data/masking.hpp"
#include "sudr/data/synthetic.hpp"
#include "sudr/inference/diagnostics.hpp"
#include "sudr/inference/hmc.hpp"
#include "sudr/inference/optimize.hpp"
#include "sudr/inference/parameters.hpp"
#include "sudr/inference/posterior.hpp"
#include "sudr/inference/priors.hpp"
#include "sudr/inference/sudr_fit.hpp"

using namespace sudr;

namespace {

SampledParams sample_point() {
    SampledParams p;
    p.mu_xi = 1.5;
    p.delta = Eigen::Vector3d(3.5, 2.5, 1.5);
    p.theta = 0.8;
    p.gamma = 1.0;
    p.sigma = 1e-3;
    p.s0 = 0.6;
    p.iu0 = 2e-3;
    p.id0 = 1e-3;
    return p;
}

ObservationSeries sample_data(std::uint64_t seed = 3) {
    return synthesize(sample_point().model(), 40, PopulationScaling::make(1e6, 1.0), seed).obs;
}

// Flat constrained coordinates whose Jacobian the transform claims.
Eigen::VectorXd constrained_coords(const Eigen::VectorXd& z, const PriorSpec& spec) {
    const SampledParams p = from_unconstrained(z, spec);
    Eigen::VectorXd v(z.size());
    v << p.mu_xi, p.delta, p.theta, p.gamma, p.sigma, p.s0, p.iu0, p.id0;
    return v;
}

LogDensity standard_gaussian() {
    LogDensity t;
    t.value = [](const Eigen::VectorXd& z) { return -0.5 * z.squaredNorm(); };
    t.gradient = [](const Eigen::VectorXd& z) { return Eigen::VectorXd(-z); };
    return t;
}

}  // namespace

TEST_CASE("priors: closed forms and truncation") {
    CHECK(half_normal_lpdf(0.7, 0.0, 2.0) ==
          doctest::Approx(std::log(std::sqrt(2.0 / std::numbers::pi) / 2.0) - 0.7 * 0.7 / 8.0).epsilon(1e-14));
    CHECK(half_cauchy_lpdf(3.0, 0.0, 10.0) ==
          doctest::Approx(std::log(2.0 / (std::numbers::pi * 10.0 * (1.0 + 0.09)))).epsilon(1e-14));
    CHECK(half_normal_lpdf(0.005, 0.01, 1.0) == kNegInf);
    CHECK(half_cauchy_lpdf(-1e-9, 0.0, 1.0) == kNegInf);
    CHECK(normal_lpdf(1.0, 1.0, 0.5) == doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi) - std::log(0.5)));
}

TEST_CASE("priors: truncated densities integrate to one") {
    // substitution x = loc + tan(u) covers [loc, inf) on u in [0, pi/2)
    for (double loc : {0.0, 0.01, 2.0}) {
        for (double scale : {0.5, 1.0, 10.0}) {
            const int n = 200000;
            double hn = 0.0, hc = 0.0;
            for (int i = 0; i < n; ++i) {
                const double u = (i + 0.5) * (std::numbers::pi / 2) / n;
                const double x = loc + scale * std::tan(u);
                const double dx = scale / (std::cos(u) * std::cos(u)) * (std::numbers::pi / 2) / n;
                hn += std::exp(half_normal_lpdf(x, loc, scale)) * dx;
                hc += std::exp(half_cauchy_lpdf(x, loc, scale)) * dx;
            }
            CHECK(hn == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(hc == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("parameters: round trip through the unconstrained space") {
    const PriorSpec spec;
    const SampledParams p = sample_point();
    const Eigen::VectorXd z = to_unconstrained(p, spec);
    CHECK(z.size() == unconstrained_dimension(2));
    const SampledParams q = from_unconstrained(z, spec);
    CHECK(q.mu_xi == doctest::Approx(p.mu_xi).epsilon(1e-12));
    for (int i = 0; i < 3; ++i) CHECK(q.delta[i] == doctest::Approx(p.delta[i]).epsilon(1e-12));
    CHECK(q.theta == doctest::Approx(p.theta).epsilon(1e-12));
    CHECK(q.gamma == doctest::Approx(p.gamma).epsilon(1e-12));
    CHECK(q.sigma == doctest::Approx(p.sigma).epsilon(1e-12));
    CHECK(q.s0 == doctest::Approx(p.s0).epsilon(1e-12));
    CHECK(q.iu0 == doctest::Approx(p.iu0).epsilon(1e-12));
    CHECK(q.id0 == doctest::Approx(p.id0).epsilon(1e-12));

    SampledParams bad = p;
    bad.s0 = 0.005;  // below the S0 prior location
    CHECK_THROWS_AS(to_unconstrained(bad, spec), DomainError);
    bad = p;
    bad.delta[1] = 0.0;
    CHECK_THROWS_AS(to_unconstrained(bad, spec), DomainError);
}

TEST_CASE("parameters: log-Jacobian equals the numerical log determinant") {
    PriorSpec spec;
    spec.mu_theta = 0.1;
    spec.mu_gamma = 0.2;
    const Eigen::VectorXd z = to_unconstrained(sample_point(), spec);
    const Eigen::Index n = z.size();
    Eigen::MatrixXd jac(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = 1e-3;
        for (Eigen::Index i = 0; i < n; ++i)
            jac(i, j) = oracle::central5(
                [&](const Eigen::VectorXd& v) { return constrained_coords(v, spec)[i]; }, z, static_cast<int>(j), h);
    }
    const double logdet = std::log(std::abs(jac.determinant()));
    CHECK(log_jacobian(z, spec) == doctest::Approx(logdet).epsilon(1e-7));
}

TEST_CASE("parameters: flat layout names and inverse") {
    const auto names = parameter_names(2);
    REQUIRE(names.size() == 13);
    CHECK(names.front() == "mu_xi");
    CHECK(names[4] == "xi_0");
    CHECK(names.back() == "id0");
    const SampledParams p = sample_point();
    const Eigen::VectorXd v = flatten(p);
    CHECK(v[4] == doctest::Approx(5.0));
    const SampledParams q = unflatten(v, 2);
    CHECK((q.xi() - p.xi()).norm() == 0.0);
    CHECK_THROWS_AS(unflatten(v, 3), DomainError);
}

TEST_CASE("posterior: decomposes into likelihood, prior and Jacobian") {
    const PriorSpec spec;
    const ObservationSeries obs = sample_data();
    const Eigen::VectorXd z = to_unconstrained(sample_point(), spec);
    const SampledParams p = from_unconstrained(z, spec);

    const Eigen::VectorXd mean = mean_field_prevalence(p.model(), obs.size());
    double lik = 0.0;
    for (int k = 0; k < obs.size(); ++k) {
        const double r = (obs.y[k] - mean[k]) / p.sigma;
        lik += -0.5 * r * r - std::log(p.sigma * std::sqrt(2.0 * std::numbers::pi));
    }
    CHECK(log_likelihood(obs, p.model()) == doctest::Approx(lik).epsilon(1e-12));
    CHECK(log_posterior(z, obs, spec) ==
          doctest::Approx(lik + log_prior(p, spec) + log_jacobian(z, spec)).epsilon(1e-12));
    CHECK(prior_terms(p, spec).sigma_jacobian == doctest::Approx(std::log(2e-3)));
}

TEST_CASE("posterior: masked days do not affect the likelihood") {
    const ObservationSeries obs = mask_sparsity(sample_data(), 0.2, 5);
    ObservationSeries altered = obs;
    for (int k = 0; k < obs.size(); ++k)
        if (!obs.is_present(k)) altered.y[k] = 0.5;
    const ModelParams m = sample_point().model();
    CHECK(log_likelihood(obs, m) == log_likelihood(altered, m));
}

TEST_CASE("posterior: gradient matches fourth-order differences") {
    const PriorSpec spec;
    const ObservationSeries obs = mask_sparsity(sample_data(), 0.1, 2);
    SampledParams p = sample_point();
    p.sigma = 2e-3;
    p.theta = 0.7;
    const Eigen::VectorXd z = to_unconstrained(p, spec);
    const Eigen::VectorXd g = grad_log_posterior(z, obs, spec);
    const auto f = [&](const Eigen::VectorXd& v) { return log_posterior(v, obs, spec); };
    for (int i = 0; i < z.size(); ++i) {
        const double fd = oracle::central5(f, z, i, 1e-4);
        CHECK(std::abs(g[i] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("posterior: out-of-support and blown-up points are -inf") {
    const PriorSpec spec;
    const ObservationSeries obs = sample_data();
    Eigen::VectorXd z = to_unconstrained(sample_point(), spec);
    z[1] = 40.0;  // xi_0 = e^40 blows the trajectory up
    CHECK(log_posterior(z, obs, spec) == kNegInf);
    z = to_unconstrained(sample_point(), spec);
    z[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK(log_posterior(z, obs, spec) == kNegInf);
}

TEST_CASE("hmc: leapfrog is reversible") {
    const LogDensity t = standard_gaussian();
    Eigen::VectorXd z(3), p(3);
    z << 0.3, -1.2, 2.0;
    p << 1.0, 0.5, -0.7;
    const PhasePoint fwd = leapfrog(z, p, 0.1, 25, t.gradient);
    const PhasePoint back = leapfrog(fwd.position, -fwd.momentum, 0.1, 25, t.gradient);
    CHECK((back.position - z).norm() <= 1e-10);
    CHECK((back.momentum + p).norm() <= 1e-10);

    Eigen::Matrix3d inv_metric;
    inv_metric << 2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 0.5;
    const PhasePoint f2 = leapfrog(z, p, 0.1, 25, t.gradient, inv_metric);
    const PhasePoint b2 = leapfrog(f2.position, -f2.momentum, 0.1, 25, t.gradient, inv_metric);
    CHECK((b2.position - z).norm() <= 1e-10);
}

TEST_CASE("hmc: leapfrog conserves energy to second order") {
    const LogDensity t = standard_gaussian();
    Eigen::VectorXd z(2), p(2);
    z << 1.0, 0.0;
    p << 0.0, 1.0;
    const double h0 = 0.5 * z.squaredNorm() + 0.5 * p.squaredNorm();
    const PhasePoint a = leapfrog(z, p, 0.02, 50, t.gradient);
    const PhasePoint b = leapfrog(z, p, 0.01, 100, t.gradient);
    const double ea = std::abs(0.5 * a.position.squaredNorm() + 0.5 * a.momentum.squaredNorm() - h0);
    const double eb = std::abs(0.5 * b.position.squaredNorm() + 0.5 * b.momentum.squaredNorm() - h0);
    CHECK(ea < 1e-3);
    CHECK(eb < ea / 3.0);
}

TEST_CASE("hmc: standard Gaussian moments") {
    HmcConfig cfg;
    cfg.chains = 4;
    cfg.iters = 2000;
    cfg.warmup = 1000;
    cfg.seed = 11;
    const ChainSet set = hmc_sample(standard_gaussian(), 3, cfg);
    REQUIRE(set.chains.size() == 4);
    CHECK(set.draws_per_chain() == 1000);
    Eigen::MatrixXd pooled(4000, 3);
    for (int c = 0; c < 4; ++c) pooled.middleRows(c * 1000, 1000) = set.chains[c].draws;
    const Eigen::RowVectorXd mean = pooled.colwise().mean();
    const Eigen::RowVectorXd var = (pooled.rowwise() - mean).array().square().colwise().sum() / 3999.0;
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(mean[j]) < 0.05);
        CHECK(std::abs(var[j] - 1.0) < 0.1);
    }
}

TEST_CASE("hmc: fixed seed gives identical chains") {
    HmcConfig cfg;
    cfg.chains = 2;
    cfg.iters = 200;
    cfg.warmup = 100;
    cfg.seed = 5;
    const ChainSet a = hmc_sample(standard_gaussian(), 2, cfg);
    const ChainSet b = hmc_sample(standard_gaussian(), 2, cfg);
    for (int c = 0; c < 2; ++c) CHECK((a.chains[c].draws - b.chains[c].draws).cwiseAbs().maxCoeff() == 0.0);
    cfg.seed = 6;
    const ChainSet d = hmc_sample(standard_gaussian(), 2, cfg);
    CHECK((a.chains[0].draws - d.chains[0].draws).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("hmc: a target with no finite point fails") {
    LogDensity t;
    t.value = [](const Eigen::VectorXd&) { return kNegInf; };
    t.gradient = [](const Eigen::VectorXd& z) { return Eigen::VectorXd(Eigen::VectorXd::Zero(z.size())); };
    HmcConfig cfg;
    cfg.chains = 1;
    cfg.iters = 20;
    cfg.warmup = 10;
    CHECK_THROWS_AS(hmc_sample(t, 2, cfg), SamplerError);
}

TEST_CASE("diagnostics: split R-hat") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    ChainDraws mixed, separated;
    for (int c = 0; c < 4; ++c) {
        Eigen::MatrixXd a(500, 1), b(500, 1);
        for (int i = 0; i < 500; ++i) {
            a(i, 0) = n(rng);
            b(i, 0) = n(rng) + (c < 2 ? 0.0 : 10.0);
        }
        mixed.push_back(a);
        separated.push_back(b);
    }
    CHECK(r_hat(mixed, 0) < 1.02);
    CHECK(r_hat(separated, 0) > 2.0);
    ChainDraws constant(2, Eigen::MatrixXd::Constant(10, 1, 3.0));
    CHECK(r_hat(constant, 0) == 1.0);
    constant[1].setConstant(4.0);
    CHECK(std::isinf(r_hat(constant, 0)));
}

TEST_CASE("diagnostics: ESS of independent and correlated draws") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 1.0);
    ChainDraws iid;
    for (int c = 0; c < 4; ++c) {
        Eigen::MatrixXd a(1000, 1);
        for (int i = 0; i < 1000; ++i) a(i, 0) = n(rng);
        iid.push_back(a);
    }
    CHECK(ess(iid, 0) == doctest::Approx(4000.0).epsilon(0.15));

    // AR(1) with rho = 0.9 started in stationarity: N (1 - rho) / (1 + rho) = 4000 / 19.
    // A single realization is noisy, so average over replicates.
    double total = 0.0;
    const int replicates = 40;
    for (int rep = 0; rep < replicates; ++rep) {
        ChainDraws ar;
        for (int c = 0; c < 4; ++c) {
            Eigen::MatrixXd b(1000, 1);
            double prev = n(rng) / std::sqrt(1 - 0.81);
            for (int i = 0; i < 1000; ++i) {
                prev = 0.9 * prev + std::sqrt(1 - 0.81) * n(rng);
                b(i, 0) = prev;
            }
            ar.push_back(b);
        }
        total += ess(ar, 0);
    }
    CHECK(total / replicates == doctest::Approx(4000.0 / 19.0).epsilon(0.1));

    ChainDraws flat(2, Eigen::MatrixXd::Constant(50, 1, 1.0));
    CHECK(ess(flat, 0) == 100.0);
}

TEST_CASE("diagnostics: quantile interpolation and summaries") {
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == 2.5);
    CHECK(quantile({1.0, 2.0, 3.0}, 0.0) == 1.0);
    CHECK(quantile({1.0, 2.0, 3.0}, 1.0) == 3.0);
    CHECK(quantile({0.0, 10.0}, 0.025) == doctest::Approx(0.25));
    ChainDraws chains(2, Eigen::MatrixXd::Zero(100, 2));
    for (int i = 0; i < 100; ++i) {
        chains[0](i, 0) = i;
        chains[1](i, 0) = 99 - i;
        chains[0](i, 1) = chains[1](i, 1) = 7.0;
    }
    const PosteriorSummary s = summarize(chains, {"a", "b"});
    CHECK(s.at("a").mean == doctest::Approx(49.5));
    CHECK(s.at("b").median == 7.0);
    CHECK_THROWS(s.at("c"));
    CHECK_THROWS_AS(summarize(chains, {"a"}), DomainError);
}

TEST_CASE("optimize: BFGS mode and Hessian of a correlated Gaussian") {
    Eigen::Matrix2d prec;
    prec << 2.0, 0.6, 0.6, 1.0;
    const Eigen::Vector2d mode(1.0, -2.0);
    LogDensity t;
    t.value = [=](const Eigen::VectorXd& z) { return -0.5 * (z - mode).dot(prec * (z - mode)); };
    t.gradient = [=](const Eigen::VectorXd& z) { return Eigen::VectorXd(-prec * (z - mode)); };
    const ModeResult r = find_mode(t, Eigen::Vector2d(5.0, 5.0));
    CHECK(r.converged);
    CHECK((r.position - mode).norm() < 1e-6);
    const Eigen::MatrixXd h = numerical_hessian(t, r.position);
    CHECK((h + prec).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("dual averaging raises the step after easy proposals and lowers it after hard ones") {
    DualAveraging up(0.1, 0.8);
    for (int i = 0; i < 50; ++i) up.update(1.0);
    CHECK(up.final_step() > 0.1);
    DualAveraging down(0.1, 0.8);
    for (int i = 0; i < 50; ++i) down.update(0.0);
    CHECK(down.final_step() < 0.1);
}

TEST_CASE("sudr fit: short run is deterministic and reports every parameter") {
    const ObservationSeries obs = sample_data(9);
    SudrFitConfig cfg;
    cfg.degree = 1;
    cfg.hmc.chains = 2;
    cfg.hmc.iters = 120;
    cfg.hmc.warmup = 60;
    cfg.hmc.seed = 4;
    cfg.hmc.parallel = false;
    const SudrFit a = fit_sudr(obs, cfg);
    const SudrFit b = fit_sudr(obs, cfg);
    CHECK(a.names == parameter_names(1));
    CHECK(a.summary.params.size() == a.names.size());
    REQUIRE(a.constrained.size() == 2);
    CHECK(a.constrained[0].rows() == 60);
    CHECK((a.constrained[1] - b.constrained[1]).cwiseAbs().maxCoeff() == 0.0);
    for (const auto& p : a.pooled()) {
        CHECK(p.theta > 0.0);
        CHECK(p.s0 <= 1.0);
        CHECK(p.xi().minCoeff() >= p.mu_xi);
    }
    SudrFitConfig bad = cfg;
    bad.degree = -1;
    CHECK_THROWS_AS(fit_sudr(obs, bad), ConfigError);
}

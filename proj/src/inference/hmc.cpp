#include "sudr/inference/hmc.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "sudr/errors.hpp"

namespace sudr {

namespace {

constexpr double kGamma = 0.05;
constexpr double kT0 = 10.0;
constexpr double kKappa = 0.75;

// Inverse metric plus the factor used to draw momenta from N(0, M).
struct Metric {
    Eigen::MatrixXd inverse;  // empty = identity
    Eigen::MatrixXd chol;     // lower factor L of inverse = L L'

    static Metric make(Eigen::MatrixXd inverse) {
        Metric m;
        if (inverse.size() == 0) return m;
        Eigen::LLT<Eigen::MatrixXd> llt(inverse);
        if (llt.info() != Eigen::Success) return m;
        m.inverse = std::move(inverse);
        m.chol = llt.matrixL();
        return m;
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& p) const { return inverse.size() == 0 ? p : Eigen::VectorXd(inverse * p); }
    double kinetic(const Eigen::VectorXd& p) const { return 0.5 * p.dot(apply(p)); }

    Eigen::VectorXd draw_momentum(std::mt19937_64& rng, std::normal_distribution<double>& normal, int dim) const {
        Eigen::VectorXd n(dim);
        for (int i = 0; i < dim; ++i) n[i] = normal(rng);
        if (inverse.size() == 0) return n;
        // Cov(L^-T n) = (L L')^-1 = M
        return chol.transpose().triangularView<Eigen::Upper>().solve(n);
    }
};

struct Proposal {
    PhasePoint end;
    double log_density{0};
    double accept_prob{0};
    bool divergent{false};
};

Proposal propose(const LogDensity& target, const Eigen::VectorXd& z, double log_density, const Eigen::VectorXd& p,
                 double step, int n_steps, const Metric& metric, double max_energy_error) {
    Proposal out;
    const double h0 = -log_density + metric.kinetic(p);
    try {
        out.end = leapfrog(z, p, step, n_steps, target.gradient, metric.inverse);
        out.log_density = target.value(out.end.position);
    } catch (const Error&) {
        out.divergent = true;
        return out;
    }
    const double h1 = -out.log_density + metric.kinetic(out.end.momentum);
    if (!std::isfinite(h1) || h1 - h0 > max_energy_error) {
        out.divergent = true;
        return out;
    }
    out.accept_prob = std::min(1.0, std::exp(h0 - h1));
    return out;
}

double initial_step(const LogDensity& target, const Eigen::VectorXd& z, double log_density, const Metric& metric,
                    std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    const Eigen::VectorXd p = metric.draw_momentum(rng, normal, static_cast<int>(z.size()));
    const auto accept = [&](double eps) {
        const Proposal prop = propose(target, z, log_density, p, eps, 1, metric, 1e300);
        return prop.divergent ? 0.0 : prop.accept_prob;
    };
    double step = 0.1;
    const bool grow = accept(step) > 0.5;
    for (int i = 0; i < 60; ++i) {
        const double a = accept(step);
        if (grow ? a <= 0.5 : a > 0.5) break;
        step *= grow ? 2.0 : 0.5;
    }
    return std::clamp(step, 1e-8, 10.0);
}

// Slow warmup windows [begin, end) for metric estimation: a fast initial
// buffer, doubling windows, and a fast terminal buffer.
std::vector<std::pair<int, int>> plan_windows(int warmup) {
    int init_buffer = 75, term_buffer = 50, base = 25;
    if (warmup < init_buffer + term_buffer + base) {
        init_buffer = static_cast<int>(0.15 * warmup);
        term_buffer = static_cast<int>(0.1 * warmup);
        base = warmup - init_buffer - term_buffer;
    }
    std::vector<std::pair<int, int>> slow;
    const int end_slow = warmup - term_buffer;
    int start = init_buffer;
    int size = base;
    while (start < end_slow && size > 0) {
        int stop = start + size;
        if (stop + 2 * size > end_slow) stop = end_slow;
        slow.emplace_back(start, stop);
        start = stop;
        size *= 2;
    }
    return slow;
}

// Running mean/covariance of positions inside a slow window.
class WindowEstimator {
public:
    explicit WindowEstimator(int dim) : mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::MatrixXd::Zero(dim, dim)) {}

    void add(const Eigen::VectorXd& z) {
        ++n_;
        const Eigen::VectorXd delta = z - mean_;
        mean_ += delta / n_;
        m2_ += delta * (z - mean_).transpose();
    }

    // Shrinks toward a small multiple of the identity, as Stan does.
    Eigen::MatrixXd inverse_metric(MetricKind kind) const {
        const double n = n_;
        const Eigen::Index dim = mean_.size();
        Eigen::MatrixXd cov = m2_ / std::max(1.0, n - 1.0);
        if (kind == MetricKind::diagonal) cov = Eigen::MatrixXd(cov.diagonal().asDiagonal());
        return (n / (n + 5.0)) * cov + 1e-3 * (5.0 / (n + 5.0)) * Eigen::MatrixXd::Identity(dim, dim);
    }

    void reset() {
        n_ = 0;
        mean_.setZero();
        m2_.setZero();
    }

private:
    int n_{0};
    Eigen::VectorXd mean_;
    Eigen::MatrixXd m2_;
};

Chain run_chain(const LogDensity& target, int dim, const HmcConfig& cfg, const Initializer& init,
                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    ChainStart start;
    double lp = -std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < cfg.max_init_attempts && !std::isfinite(lp); ++attempt) {
        start = init(rng);
        lp = target.value(start.position);
        if (!std::isfinite(lp)) continue;
        try {
            if (!target.gradient(start.position).allFinite()) lp = -std::numeric_limits<double>::infinity();
        } catch (const Error&) {
            lp = -std::numeric_limits<double>::infinity();
        }
    }
    if (!std::isfinite(lp))
        throw SamplerError("no finite starting point after " + std::to_string(cfg.max_init_attempts) + " attempts");

    Eigen::VectorXd z = start.position;
    const bool adapt_metric = cfg.metric != MetricKind::identity;
    Metric metric = Metric::make(adapt_metric ? start.inv_metric : Eigen::MatrixXd{});
    DualAveraging adapt(initial_step(target, z, lp, metric, rng), cfg.target_accept);

    const auto windows = adapt_metric ? plan_windows(cfg.warmup) : std::vector<std::pair<int, int>>{};
    std::size_t window_idx = 0;
    WindowEstimator estimator(dim);

    Chain chain;
    chain.seed = seed;
    const int kept = cfg.iters - cfg.warmup;
    chain.draws.resize(kept, dim);
    chain.log_density.resize(kept);
    chain.divergent.assign(static_cast<std::size_t>(kept), false);

    double step = adapt.step();
    double accept_sum = 0.0;
    for (int it = 0; it < cfg.iters; ++it) {
        const bool warm = it < cfg.warmup;
        if (it == cfg.warmup) step = adapt.final_step();

        const Eigen::VectorXd p = metric.draw_momentum(rng, normal, dim);
        // jitter after warmup breaks the near-periodic trajectories a fixed
        // L * step can produce on near-Gaussian targets
        const double used = warm ? step : step * (1.0 + cfg.step_jitter * (2.0 * unif(rng) - 1.0));
        const Proposal prop = propose(target, z, lp, p, used, cfg.leapfrog_steps, metric, cfg.max_energy_error);
        if (!prop.divergent && unif(rng) < prop.accept_prob) {
            z = prop.end.position;
            lp = prop.log_density;
        }

        if (warm) {
            if (prop.divergent) ++chain.warmup_divergences;
            step = adapt.update(prop.accept_prob);
            if (window_idx < windows.size()) {
                const auto [begin, end] = windows[window_idx];
                if (it >= begin && it < end) estimator.add(z);
                if (it + 1 == end) {
                    Metric next = Metric::make(estimator.inverse_metric(cfg.metric));
                    if (next.inverse.size() != 0) metric = std::move(next);
                    estimator.reset();
                    ++window_idx;
                    adapt.restart(initial_step(target, z, lp, metric, rng));
                    step = adapt.step();
                }
            }
        } else {
            const int k = it - cfg.warmup;
            chain.draws.row(k) = z.transpose();
            chain.log_density[k] = lp;
            chain.divergent[static_cast<std::size_t>(k)] = prop.divergent;
            accept_sum += prop.accept_prob;
        }
    }
    chain.step_size = step;
    chain.accept_rate = accept_sum / kept;
    chain.inv_metric = metric.inverse.size() == 0 ? Eigen::MatrixXd::Identity(dim, dim) : metric.inverse;

    const auto n_div = std::count(chain.divergent.begin(), chain.divergent.end(), true);
    if (n_div == kept)
        throw SamplerError("every post-warmup iteration diverged (chain seed " + std::to_string(seed) + ")");
    if (chain.accept_rate < 0.1)
        throw SamplerError("post-warmup acceptance " + std::to_string(chain.accept_rate) + " below 0.1 (chain seed " +
                           std::to_string(seed) + ")");
    return chain;
}

}  // namespace

PhasePoint leapfrog(const Eigen::VectorXd& z, const Eigen::VectorXd& momentum, double step_size, int n_steps,
                    const GradientFn& grad, const Eigen::MatrixXd& inv_metric) {
    if (!(step_size > 0)) throw DomainError("leapfrog step size must be positive");
    if (n_steps < 1) throw DomainError("leapfrog needs at least one step");
    const bool identity = inv_metric.size() == 0;
    PhasePoint pt{z, momentum};
    pt.momentum += 0.5 * step_size * grad(pt.position);
    for (int s = 0; s < n_steps; ++s) {
        if (identity)
            pt.position += step_size * pt.momentum;
        else
            pt.position += step_size * (inv_metric * pt.momentum);
        const Eigen::VectorXd g = grad(pt.position);
        pt.momentum += (s + 1 == n_steps ? 0.5 : 1.0) * step_size * g;
    }
    return pt;
}

int ChainSet::divergences() const {
    int n = 0;
    for (const auto& c : chains) n += static_cast<int>(std::count(c.divergent.begin(), c.divergent.end(), true));
    return n;
}

std::vector<Eigen::MatrixXd> ChainSet::draws() const {
    std::vector<Eigen::MatrixXd> out;
    for (const auto& c : chains) out.push_back(c.draws);
    return out;
}

ChainSet hmc_sample(const LogDensity& target, int dimension, const HmcConfig& config, Initializer init) {
    if (config.chains < 1) throw ConfigError("need at least one chain");
    if (!(config.iters > config.warmup && config.warmup >= 1)) throw ConfigError("require iters > warmup >= 1");
    if (config.leapfrog_steps < 1) throw ConfigError("leapfrog_steps must be >= 1");
    if (!(config.step_jitter >= 0.0 && config.step_jitter < 1.0)) throw ConfigError("step_jitter must lie in [0, 1)");
    if (!init) {
        init = [dimension](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> u(-2.0, 2.0);
            ChainStart s;
            s.position.resize(dimension);
            for (int i = 0; i < dimension; ++i) s.position[i] = u(rng);
            return s;
        };
    }

    ChainSet set;
    set.warmup_len = config.warmup;
    set.seed = config.seed;
    const auto seed_of = [&](int c) { return config.seed + static_cast<std::uint64_t>(c); };
    if (config.parallel && config.chains > 1) {
        std::vector<std::future<Chain>> jobs;
        for (int c = 0; c < config.chains; ++c)
            jobs.push_back(std::async(std::launch::async, run_chain, std::cref(target), dimension, std::cref(config),
                                      std::cref(init), seed_of(c)));
        for (auto& j : jobs) set.chains.push_back(j.get());
    } else {
        for (int c = 0; c < config.chains; ++c) set.chains.push_back(run_chain(target, dimension, config, init, seed_of(c)));
    }
    return set;
}

DualAveraging::DualAveraging(double initial_step, double target_accept) : target_(target_accept) {
    restart(initial_step);
}

void DualAveraging::restart(double step) {
    step_ = step;
    mu_ = std::log(10.0 * step);
    h_bar_ = 0.0;
    log_step_bar_ = 0.0;
    count_ = 0;
}

double DualAveraging::update(double accept_prob) {
    ++count_;
    const double m = count_;
    const double w = 1.0 / (m + kT0);
    h_bar_ = (1.0 - w) * h_bar_ + w * (target_ - accept_prob);
    const double log_step = mu_ - std::sqrt(m) / kGamma * h_bar_;
    const double eta = std::pow(m, -kKappa);
    log_step_bar_ = eta * log_step + (1.0 - eta) * log_step_bar_;
    step_ = std::exp(log_step);
    return step_;
}

double DualAveraging::final_step() const { return count_ == 0 ? step_ : std::exp(log_step_bar_); }

}  // namespace sudr

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sudr/inference/gradient.hpp"

namespace sudr {

enum class MetricKind { identity, diagonal, dense };

/// Fixed-length HMC with dual-averaging step-size adaptation.
struct HmcConfig {
    int chains{4};
    int iters{2000};  ///< total per chain, warmup included
    int warmup{1000};
    double target_accept{0.8};
    std::uint64_t seed{1};
    int leapfrog_steps{20};
    double max_energy_error{1000.0};
    /// Post-warmup step sizes are drawn uniformly from step * [1 - j, 1 + j].
    double step_jitter{0.2};
    /// identity keeps the unit mass matrix throughout; diagonal and dense
    /// re-estimate the inverse metric from draws in doubling warmup windows.
    MetricKind metric{MetricKind::identity};
    bool parallel{true};
    int max_init_attempts{100};
};

struct PhasePoint {
    Eigen::VectorXd position;
    Eigen::VectorXd momentum;
};

/// Velocity-Verlet integration of Hamiltonian dynamics for the potential
/// -log p with kinetic energy p' M^-1 p / 2. An empty `inv_metric` means
/// M = I.
PhasePoint leapfrog(const Eigen::VectorXd& z, const Eigen::VectorXd& momentum, double step_size, int n_steps,
                    const GradientFn& grad, const Eigen::MatrixXd& inv_metric = {});

struct Chain {
    Eigen::MatrixXd draws;  ///< post-warmup draws, one row per iteration, unconstrained
    Eigen::VectorXd log_density;
    std::vector<bool> divergent;
    double step_size{0};
    double accept_rate{0};
    Eigen::MatrixXd inv_metric;
    std::uint64_t seed{0};
    int warmup_divergences{0};
};

struct ChainSet {
    std::vector<Chain> chains;
    int warmup_len{0};
    std::uint64_t seed{0};

    int dimension() const { return chains.empty() ? 0 : static_cast<int>(chains.front().draws.cols()); }
    int draws_per_chain() const { return chains.empty() ? 0 : static_cast<int>(chains.front().draws.rows()); }
    int divergences() const;
    std::vector<Eigen::MatrixXd> draws() const;
};

/// Where a chain starts, optionally with a starting inverse metric.
struct ChainStart {
    Eigen::VectorXd position;
    Eigen::MatrixXd inv_metric;
};

using Initializer = std::function<ChainStart(std::mt19937_64&)>;

/// Runs config.chains independent chains, chain c seeded with seed + c.
/// The default initializer draws each coordinate uniformly from [-2, 2].
/// Throws SamplerError when post-warmup acceptance falls below 0.1 or
/// every iteration diverges, and when no finite starting point is found.
ChainSet hmc_sample(const LogDensity& target, int dimension, const HmcConfig& config, Initializer init = {});

/// Dual averaging of the log step size toward a target acceptance.
class DualAveraging {
public:
    DualAveraging(double initial_step, double target_accept);
    void restart(double step);
    double update(double accept_prob);
    double step() const { return step_; }
    double final_step() const;

private:
    double target_;
    double mu_{0};
    double h_bar_{0};
    double log_step_bar_{0};
    double step_{0};
    int count_{0};
};

}  // namespace sudr

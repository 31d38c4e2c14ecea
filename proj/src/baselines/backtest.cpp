#include "sudr/baselines/backtest.hpp"

#include <cmath>

#include "sudr/errors.hpp"

namespace sudr {

BacktestResult backtest(const std::string& model_name, const Eigen::VectorXd& predicted, const ObservationSeries& obs) {
    if (predicted.size() != obs.size())
        throw DomainError(model_name + ": prediction has " + std::to_string(predicted.size()) + " days, expected " +
                          std::to_string(obs.size()));
    BacktestResult r;
    r.model_name = model_name;
    r.predicted = predicted;
    r.observed = obs.y;
    r.present = obs.present;
    double sq = 0.0;
    for (int k = 1; k < obs.size(); ++k) {
        if (!obs.is_present(k)) continue;
        const double e = predicted[k] - obs.y[k];
        sq += e * e;
        ++r.scored_days;
    }
    r.empty = r.scored_days == 0;
    r.rmse = r.empty ? 0.0 : std::sqrt(sq / r.scored_days);
    return r;
}

}  // namespace sudr

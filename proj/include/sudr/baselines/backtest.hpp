#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sudr/data/observation.hpp"

namespace sudr {

/// In-sample reconstruction of the documented prevalence from day 1.
/// `rmse` covers unmasked days 2..T; day 1 seeds every model and is not
/// scored. With no scored day, rmse is 0 and `empty` is set.
struct BacktestResult {
    std::string model_name;
    Eigen::VectorXd predicted;
    Eigen::VectorXd observed;
    std::vector<bool> present;
    double rmse{0};
    int scored_days{0};
    bool empty{false};
};

/// `predicted` must have one entry per observed day.
BacktestResult backtest(const std::string& model_name, const Eigen::VectorXd& predicted, const ObservationSeries& obs);

}  // namespace sudr

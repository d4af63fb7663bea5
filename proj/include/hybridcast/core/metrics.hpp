#pragma once

#include <cstddef>
#include <span>

namespace hybridcast::core {

/**
 * Forecast accuracy over an evaluation window.
 *
 * MASE scales the absolute-error sum by the sum of absolute one-step
 * changes of the actuals over the same window:
 *
 *   MASE = ((n-1)/n) * sum_t |e_t| / sum_{t=2..n} |y_t - y_{t-1}|
 *
 * which makes it invariant to a common rescaling of both sequences.
 */
struct MetricReport {
    double mae = 0.0;
    double mse = 0.0;
    double mase = 0.0;
    std::size_t n = 0;
};

/// Compute MAE, MSE, and MASE of a forecast against actuals.
/// Requires equal lengths >= 2; a constant actual sequence makes the MASE
/// denominator vanish and is rejected.
MetricReport evaluate(std::span<const double> actual, std::span<const double> forecast);

}  // namespace hybridcast::core

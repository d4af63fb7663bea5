#include "hybridcast/core/metrics.hpp"

#include <cmath>

#include "hybridcast/core/errors.hpp"

namespace hybridcast::core {

MetricReport evaluate(std::span<const double> actual, std::span<const double> forecast) {
    if (actual.size() != forecast.size())
        throw ShapeError("evaluate: actual and forecast lengths differ");
    const std::size_t n = actual.size();
    if (n < 2) throw InsufficientDataError("evaluate: need at least 2 points");

    double abs_sum = 0.0;
    double sq_sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (!std::isfinite(actual[t]) || !std::isfinite(forecast[t]))
            throw DomainError("evaluate: non-finite value at index " + std::to_string(t));
        const double e = actual[t] - forecast[t];
        abs_sum += std::abs(e);
        sq_sum += e * e;
    }

    double naive_sum = 0.0;
    for (std::size_t t = 1; t < n; ++t) naive_sum += std::abs(actual[t] - actual[t - 1]);
    if (naive_sum == 0.0)
        throw DegenerateInputError("evaluate: constant actuals give a zero MASE denominator");

    const double dn = static_cast<double>(n);
    MetricReport r;
    r.n = n;
    r.mae = abs_sum / dn;
    r.mse = sq_sum / dn;
    r.mase = ((dn - 1.0) / dn) * (abs_sum / naive_sum);
    return r;
}

}  // namespace hybridcast::core

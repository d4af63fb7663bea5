#include "hybridcast/core/adf.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "hybridcast/core/errors.hpp"
#include "hybridcast/core/linalg.hpp"
#include "hybridcast/core/stats.hpp"

namespace hybridcast::core {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double mackinnon_pvalue(double tau) {
    // Response-surface polynomials for the constant-only regression,
    // MacKinnon (1994). Below tau_min the p-value saturates at 0, above
    // tau_max at 1; otherwise p = Phi(poly(tau)) with the small-p branch
    // used for tau <= tau_star.
    constexpr double tau_max = 2.74;
    constexpr double tau_min = -18.83;
    constexpr double tau_star = -1.61;
    constexpr double small_p[] = {2.1659, 1.4412, 3.8296e-2};
    constexpr double large_p[] = {1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2};

    if (tau > tau_max) return 1.0;
    if (tau < tau_min) return 0.0;
    double z = 0.0;
    if (tau <= tau_star) {
        z = small_p[0] + tau * (small_p[1] + tau * small_p[2]);
    } else {
        z = large_p[0] + tau * (large_p[1] + tau * (large_p[2] + tau * large_p[3]));
    }
    return normal_cdf(z);
}

namespace {

struct AdfRegression {
    double tstat = 0.0;
    double rss = 0.0;
    int n_obs = 0;
    double last_lag_tstat = 0.0;
    int n_params = 0;
};

// Dickey-Fuller regression with `lags` lagged differences and a constant.
AdfRegression run_regression(std::span<const double> y, int lags) {
    const int n = static_cast<int>(y.size());
    const int start = lags + 1;
    const int rows = n - start;
    const int cols = 2 + lags;  // constant, y_{t-1}, dy_{t-1}..dy_{t-lags}
    if (rows < cols + 3)
        throw InsufficientDataError("adf_test: too few observations for requested lag order");

    Matrix x(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    std::vector<double> dy(static_cast<std::size_t>(rows), 0.0);
    for (int t = start; t < n; ++t) {
        const std::size_t r = static_cast<std::size_t>(t - start);
        dy[r] = y[t] - y[t - 1];
        x(r, 0) = 1.0;
        x(r, 1) = y[t - 1];
        for (int i = 1; i <= lags; ++i) x(r, static_cast<std::size_t>(1 + i)) = y[t - i] - y[t - i - 1];
    }

    const OlsFit fit = ols(x, dy);
    AdfRegression out;
    out.tstat = fit.coeffs[1] / fit.std_errors[1];
    out.rss = fit.rss;
    out.n_obs = rows;
    out.n_params = cols;
    if (lags > 0) {
        const std::size_t last = static_cast<std::size_t>(cols - 1);
        out.last_lag_tstat = fit.coeffs[last] / fit.std_errors[last];
    }
    return out;
}

}  // namespace

AdfResult adf_test(std::span<const double> y, std::optional<int> max_lag, AdfLagPolicy policy) {
    const int n = static_cast<int>(y.size());
    if (n < 10) throw InsufficientDataError("adf_test: need at least 10 observations");
    {
        const double first = y[0];
        bool constant = true;
        for (double v : y)
            if (v != first) {
                constant = false;
                break;
            }
        if (constant) throw DegenerateInputError("adf_test: constant series");
    }

    int cap = max_lag.value_or(
        static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25))));
    cap = std::min(cap, n / 2 - 2);
    if (cap < 0) cap = 0;
    if (n < 10 + cap) throw InsufficientDataError("adf_test: series too short for lag order");

    int chosen = cap;
    if (policy == AdfLagPolicy::SchwertTStat) {
        // Ng-Perron style general-to-specific: drop the last lagged
        // difference while its t-ratio is insignificant at the 10% two-sided
        // level (|t| < 1.6449).
        chosen = 0;
        for (int k = cap; k >= 1; --k) {
            const AdfRegression reg = run_regression(y, k);
            if (std::abs(reg.last_lag_tstat) >= 1.6449) {
                chosen = k;
                break;
            }
        }
    } else if (policy == AdfLagPolicy::Aic) {
        double best = std::numeric_limits<double>::infinity();
        chosen = 0;
        // Common estimation window across candidates so AICs are comparable.
        for (int k = 0; k <= cap; ++k) {
            const int skip = cap - k;
            const AdfRegression reg =
                run_regression(y.subspan(static_cast<std::size_t>(skip)), k);
            const double aic =
                static_cast<double>(reg.n_obs) * std::log(reg.rss / reg.n_obs) +
                2.0 * static_cast<double>(reg.n_params);
            if (aic < best) {
                best = aic;
                chosen = k;
            }
        }
    }

    const AdfRegression reg = run_regression(y, chosen);
    AdfResult result;
    result.statistic = reg.tstat;
    result.p_value = mackinnon_pvalue(reg.tstat);
    result.lags_used = chosen;
    result.n_obs = reg.n_obs;
    return result;
}

}  // namespace hybridcast::core

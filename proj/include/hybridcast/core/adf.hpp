#pragma once

#include <optional>
#include <span>

namespace hybridcast::core {

/// Result of the Augmented Dickey-Fuller unit-root test.
struct AdfResult {
    double statistic = 0.0;  // t-ratio on the lagged level
    double p_value = 1.0;
    int lags_used = 0;
    int n_obs = 0;  // regression observations
};

/// Lag-order policy for the ADF regression.
enum class AdfLagPolicy {
    SchwertTStat,  // Schwert cap, then drop the last lag while insignificant
    Aic,           // Schwert cap, pick the lag count minimizing AIC
    Fixed,         // use max_lag exactly
};

/**
 * Augmented Dickey-Fuller test with a constant (no trend):
 *
 *   dy_t = alpha + beta * y_{t-1} + sum_i delta_i * dy_{t-i} + e_t
 *
 * The reported p-value comes from the MacKinnon response-surface
 * approximation for the constant-only case, so a small p rejects the unit
 * root (series looks stationary).
 *
 * max_lag defaults to the Schwert rule floor(12 * (n/100)^0.25).
 */
AdfResult adf_test(std::span<const double> y, std::optional<int> max_lag = std::nullopt,
                   AdfLagPolicy policy = AdfLagPolicy::SchwertTStat);

/// MacKinnon (1994) cumulative p-value for the constant-only tau statistic.
double mackinnon_pvalue(double tau);

/// Standard normal CDF.
double normal_cdf(double z);

}  // namespace hybridcast::core

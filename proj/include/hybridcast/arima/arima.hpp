#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hybridcast::arima {

/// Nonseasonal model orders. p + q >= 1 unless the model is the explicit
/// random-walk variant; d <= 2.
struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;
};

/**
 * Fitted ARMA(p,q) on a d-differenced series:
 *
 *   w_t = c + a_1 w_{t-1} + ... + a_p w_{t-p}
 *             + e_t - t_1 e_{t-1} - ... - t_q e_{t-q}
 *
 * Pure AR orders are fitted by least squares; q > 0 by conditional
 * sum-of-squares minimisation. `stationary` is a warning flag: false means
 * the AR polynomial has a root on or inside the unit circle.
 */
struct ArimaModel {
    ArimaOrder order;
    std::vector<double> ar_coeffs;   // a_1..a_p
    std::vector<double> ma_coeffs;   // t_1..t_q
    double intercept = 0.0;
    std::vector<double> residuals;   // in-sample, aligned to the differenced series
    std::size_t residual_offset = 0; // first valid residual index
    double sigma2 = 0.0;
    double aic = 0.0;
    bool stationary = true;
    std::vector<double> history_tail;  // last max(p,q)+d training observations
};

/// d-fold first differences.
std::vector<double> difference(std::span<const double> y, int d);

/// Invert difference(); `seeds` holds the d values that preceded diffed[0].
std::vector<double> undifference(std::span<const double> diffed, std::span<const double> seeds);

/// Fit by OLS (q == 0) or CSS with BFGS iterations (q > 0). Deterministic.
ArimaModel fit(std::span<const double> y, ArimaOrder order);

/**
 * Pick d as the smallest order making the ADF p-value drop below 0.05,
 * then minimise AIC over the (p, q) grid on a common estimation window.
 * Ties break toward smaller p+q, then smaller p.
 */
ArimaOrder select_order(std::span<const double> y, int p_max, int d_max, int q_max);

/// One-step-ahead forecast of the next value after `history` (original,
/// undifferenced scale). Residuals for MA terms are rebuilt by filtering
/// the supplied history.
double forecast_one_step(const ArimaModel& model, std::span<const double> history);

/// Most recent observation as the forecast.
double random_walk_forecast(std::span<const double> history);

/**
 * One-step forecasts for indices [first_index, series.size()) where each
 * forecast sees actual observations only. The model is not refitted.
 * Pure-AR models use the OpenMP path; q > 0 falls back to the sequential
 * innovation filter. Output is identical to rolling_one_step_serial.
 */
std::vector<double> rolling_one_step(const ArimaModel& model, std::span<const double> series,
                                     std::size_t first_index);

/// Reference implementation of rolling_one_step (plain loop, no OpenMP).
std::vector<double> rolling_one_step_serial(const ArimaModel& model,
                                            std::span<const double> series,
                                            std::size_t first_index);

/// In-sample one-step fitted values on the original scale, aligned so that
/// entry t corresponds to series index first_defined_index() + t.
std::vector<double> fitted_one_step(const ArimaModel& model, std::span<const double> series);

/// First series index with a defined one-step fitted value.
std::size_t first_defined_index(const ArimaModel& model);

/// True when all roots of 1 - a_1 z - ... - a_p z^p lie outside the unit
/// circle (checked via the step-down Levinson recursion).
bool ar_polynomial_stationary(std::span<const double> ar_coeffs);

}  // namespace hybridcast::arima

#pragma once

#include <span>
#include <vector>

namespace hybridcast::core {

double mean(std::span<const double> x);

/// Sample variance with the given delta degrees of freedom (0 = population).
double variance(std::span<const double> x, int ddof = 1);

double std_dev(std::span<const double> x, int ddof = 1);

/**
 * Standard (non-excess) sample kurtosis m4 / m2^2.
 *
 * Equals 3 for Gaussian data in expectation; no small-sample bias
 * correction is applied.
 */
double kurtosis(std::span<const double> x);

/// Sample autocorrelations for lags 0..max_lag; acf[0] == 1.
std::vector<double> acf(std::span<const double> x, int max_lag);

/// Partial autocorrelations for lags 1..max_lag via Durbin-Levinson.
std::vector<double> pacf(std::span<const double> x, int max_lag);

/// Pearson correlation of two equal-length sequences.
double correlation(std::span<const double> x, std::span<const double> y);

}  // namespace hybridcast::core

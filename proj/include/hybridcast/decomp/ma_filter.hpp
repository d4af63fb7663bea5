#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hybridcast::decomp {

/**
 * Trailing moving-average split of a series:
 *
 *   l_t = (1/m) * sum_{i=t-m+1..t} y_i   (defined for t >= m-1)
 *   r_t = y_t - l_t
 *
 * `offset` is m-1, the input index of linear_part[0]; the identity
 * l_t + r_t = y_t holds exactly at every defined index.
 */
struct MaDecomposition {
    int m = 1;
    std::vector<double> linear_part;
    std::vector<double> residual_part;
    std::size_t offset = 0;
};

MaDecomposition ma_filter(std::span<const double> y, int m);

struct MaSearchResult {
    int m = 0;
    double criterion = 0.0;  // achieved ADF p-value or |kurtosis - 3|
};

/**
 * Smallest m in 2..m_max whose trailing-average component passes the ADF
 * stationarity test at p_threshold. Throws SearchExhaustedError (carrying
 * the best p seen) when no filter length qualifies.
 */
MaSearchResult find_ma_length_adf(std::span<const double> y, double p_threshold = 0.05,
                                  int m_max = 0);

/**
 * m in 2..m_max whose smoothed component has sample kurtosis closest to 3
 * (ties toward smaller m). Degenerate candidates are skipped.
 */
MaSearchResult find_ma_length_kurtosis(std::span<const double> y, int m_max = 0);

}  // namespace hybridcast::decomp

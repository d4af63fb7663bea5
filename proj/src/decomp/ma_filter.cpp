#include "hybridcast/decomp/ma_filter.hpp"

#include <cmath>
#include <limits>

#include "hybridcast/core/adf.hpp"
#include "hybridcast/core/errors.hpp"
#include "hybridcast/core/stats.hpp"

namespace hybridcast::decomp {

MaDecomposition ma_filter(std::span<const double> y, int m) {
    const std::size_t n = y.size();
    if (m < 1 || static_cast<std::size_t>(m) > n)
        throw BoundsError("ma_filter: m must be in 1..length");

    MaDecomposition out;
    out.m = m;
    out.offset = static_cast<std::size_t>(m - 1);
    const std::size_t count = n - out.offset;
    out.linear_part.resize(count);
    out.residual_part.resize(count);

    // Running sum would be cheaper but drifts; the window is recomputed so
    // that l_t + r_t = y_t holds at machine precision.
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t t = out.offset; t < n; ++t) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i) sum += y[t - static_cast<std::size_t>(i)];
        const double l = sum * inv_m;
        out.linear_part[t - out.offset] = l;
        out.residual_part[t - out.offset] = y[t] - l;
    }
    return out;
}

MaSearchResult find_ma_length_adf(std::span<const double> y, double p_threshold, int m_max) {
    const int n = static_cast<int>(y.size());
    if (m_max <= 0) m_max = n / 2 - 1;
    if (m_max >= n / 2) throw BoundsError("find_ma_length_adf: m_max must be below length/2");
    if (m_max < 2) throw BoundsError("find_ma_length_adf: m_max must be at least 2");

    double best_p = std::numeric_limits<double>::infinity();
    for (int m = 2; m <= m_max; ++m) {
        const MaDecomposition dec = ma_filter(y, m);
        double p;
        try {
            p = core::adf_test(dec.linear_part).p_value;
        } catch (const Error&) {
            continue;
        }
        best_p = std::min(best_p, p);
        if (p < p_threshold) return MaSearchResult{m, p};
    }
    throw SearchExhaustedError(
        "find_ma_length_adf: no filter length reaches the stationarity threshold", best_p);
}

MaSearchResult find_ma_length_kurtosis(std::span<const double> y, int m_max) {
    const int n = static_cast<int>(y.size());
    if (m_max <= 0) m_max = n / 2 - 1;
    if (m_max >= n / 2)
        throw BoundsError("find_ma_length_kurtosis: m_max must be below length/2");
    if (m_max < 2) throw BoundsError("find_ma_length_kurtosis: m_max must be at least 2");

    MaSearchResult best{0, std::numeric_limits<double>::infinity()};
    for (int m = 2; m <= m_max; ++m) {
        const MaDecomposition dec = ma_filter(y, m);
        double k;
        try {
            k = core::kurtosis(dec.linear_part);
        } catch (const Error&) {
            continue;  // degenerate variance at this m
        }
        const double dist = std::abs(k - 3.0);
        if (dist < best.criterion) best = MaSearchResult{m, dist};
    }
    if (best.m == 0)
        throw DegenerateInputError("find_ma_length_kurtosis: every candidate was degenerate");
    return best;
}

}  // namespace hybridcast::decomp

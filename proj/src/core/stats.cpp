#include "hybridcast/core/stats.hpp"

#include <cmath>
#include <cstddef>

#include "hybridcast/core/errors.hpp"

namespace hybridcast::core {

double mean(std::span<const double> x) {
    if (x.empty()) throw InsufficientDataError("mean: empty sequence");
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double variance(std::span<const double> x, int ddof) {
    if (x.size() <= static_cast<std::size_t>(ddof))
        throw InsufficientDataError("variance: need more than ddof observations");
    const double mu = mean(x);
    double ss = 0.0;
    for (double v : x) {
        const double d = v - mu;
        ss += d * d;
    }
    return ss / static_cast<double>(x.size() - static_cast<std::size_t>(ddof));
}

double std_dev(std::span<const double> x, int ddof) { return std::sqrt(variance(x, ddof)); }

double kurtosis(std::span<const double> x) {
    if (x.size() < 4) throw InsufficientDataError("kurtosis: need at least 4 observations");
    const double mu = mean(x);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : x) {
        const double d = v - mu;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    const double n = static_cast<double>(x.size());
    m2 /= n;
    m4 /= n;
    // Rounding can leave a nonzero m2 on a constant series; compare against
    // the magnitude of the data.
    if (m2 <= 1e-24 * (1.0 + mu * mu)) throw DegenerateInputError("kurtosis: zero variance");
    return m4 / (m2 * m2);
}

std::vector<double> acf(std::span<const double> x, int max_lag) {
    const int n = static_cast<int>(x.size());
    if (max_lag < 0 || max_lag >= n) throw BoundsError("acf: max_lag out of range");
    const double mu = mean(x);
    double c0 = 0.0;
    for (double v : x) {
        const double d = v - mu;
        c0 += d * d;
    }
    if (c0 <= 0.0) throw DegenerateInputError("acf: constant series");
    std::vector<double> out(static_cast<std::size_t>(max_lag) + 1, 0.0);
    out[0] = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (int t = k; t < n; ++t) ck += (x[t] - mu) * (x[t - k] - mu);
        out[static_cast<std::size_t>(k)] = ck / c0;
    }
    return out;
}

std::vector<double> pacf(std::span<const double> x, int max_lag) {
    const int n = static_cast<int>(x.size());
    if (max_lag < 1 || max_lag >= n / 2) throw BoundsError("pacf: max_lag out of range");
    const std::vector<double> rho = acf(x, max_lag);

    // Durbin-Levinson recursion: phi[k][k] is the partial autocorrelation.
    std::vector<double> out(static_cast<std::size_t>(max_lag), 0.0);
    std::vector<double> phi_prev(static_cast<std::size_t>(max_lag) + 1, 0.0);
    std::vector<double> phi_cur(static_cast<std::size_t>(max_lag) + 1, 0.0);

    phi_prev[1] = rho[1];
    out[0] = rho[1];
    double err = 1.0 - rho[1] * rho[1];
    for (int k = 2; k <= max_lag; ++k) {
        double num = rho[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j)
            num -= phi_prev[static_cast<std::size_t>(j)] * rho[static_cast<std::size_t>(k - j)];
        if (err <= 0.0) throw DegenerateInputError("pacf: degenerate prediction error");
        const double phikk = num / err;
        for (int j = 1; j < k; ++j)
            phi_cur[static_cast<std::size_t>(j)] =
                phi_prev[static_cast<std::size_t>(j)] -
                phikk * phi_prev[static_cast<std::size_t>(k - j)];
        phi_cur[static_cast<std::size_t>(k)] = phikk;
        out[static_cast<std::size_t>(k - 1)] = phikk;
        err *= (1.0 - phikk * phikk);
        std::swap(phi_prev, phi_cur);
    }
    return out;
}

double correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ShapeError("correlation: length mismatch");
    if (x.size() < 2) throw InsufficientDataError("correlation: need at least 2 points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw DegenerateInputError("correlation: constant input");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace hybridcast::core

#pragma once

// Test-only reference implementations, written independently of the
// library paths they check.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "hybridcast/core/rng.hpp"
#include "hybridcast/mlp/mlp.hpp"

namespace oracles {

/// Simulate an AR(p) process with unit-variance Gaussian innovations.
inline std::vector<double> simulate_ar(std::span<const double> coeffs, std::size_t n,
                                       std::uint64_t seed, double sigma = 1.0,
                                       double intercept = 0.0, std::size_t burn = 200) {
    hybridcast::core::Rng rng(seed);
    const std::size_t p = coeffs.size();
    std::vector<double> x(n + burn, 0.0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        double v = intercept + sigma * rng.normal();
        for (std::size_t i = 0; i < p && i < t; ++i) v += coeffs[i] * x[t - 1 - i];
        x[t] = v;
    }
    return {x.begin() + static_cast<std::ptrdiff_t>(burn), x.end()};
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    hybridcast::core::Rng rng(seed);
    std::vector<double> x(n, 0.0);
    for (double& v : x) v = rng.normal();
    return x;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    hybridcast::core::Rng rng(seed);
    std::vector<double> x(n, 0.0);
    double level = 0.0;
    for (double& v : x) {
        level += rng.normal();
        v = level;
    }
    return x;
}

/// Plain transcription of the error-metric definitions, kept separate from
/// core::evaluate.
struct DirectMetrics {
    double mae;
    double mse;
    double mase;
};

inline DirectMetrics direct_metrics(std::span<const double> actual,
                                    std::span<const double> forecast) {
    const std::size_t n = actual.size();
    double abs_sum = 0.0, sq_sum = 0.0, naive = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double e = actual[t] - forecast[t];
        abs_sum += std::fabs(e);
        sq_sum += e * e;
    }
    for (std::size_t t = 1; t < n; ++t) naive += std::fabs(actual[t] - actual[t - 1]);
    DirectMetrics m{};
    m.mae = abs_sum / static_cast<double>(n);
    m.mse = sq_sum / static_cast<double>(n);
    m.mase = (static_cast<double>(n - 1) / static_cast<double>(n)) * abs_sum / naive;
    return m;
}

/// Independent forward pass of the three-layer network, evaluated with a
/// different loop structure and accumulation order than the library.
inline double independent_forward(const hybridcast::mlp::MlpModel& model,
                                  std::span<const double> raw_features) {
    const int n_in = model.n_input;
    const int n_hid = model.n_hidden;
    std::vector<double> scaled(static_cast<std::size_t>(n_in), 0.0);
    for (int i = 0; i < n_in; ++i) {
        const double lo = model.input_scaling[static_cast<std::size_t>(i)].first;
        const double hi = model.input_scaling[static_cast<std::size_t>(i)].second;
        scaled[static_cast<std::size_t>(i)] =
            (hi > lo) ? (raw_features[static_cast<std::size_t>(i)] - lo) / (hi - lo) : 0.5;
    }
    // Accumulate hidden pre-activations feature-major instead of unit-major.
    std::vector<double> pre(static_cast<std::size_t>(n_hid), 0.0);
    for (int j = 0; j < n_hid; ++j) pre[static_cast<std::size_t>(j)] = model.hidden_bias[static_cast<std::size_t>(j)];
    for (int i = 0; i < n_in; ++i) {
        for (int j = 0; j < n_hid; ++j) {
            pre[static_cast<std::size_t>(j)] +=
                model.hidden_weights[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_in) +
                                     static_cast<std::size_t>(i)] *
                scaled[static_cast<std::size_t>(i)];
        }
    }
    double out = model.output_bias;
    for (int j = 0; j < n_hid; ++j)
        out += model.output_weights[static_cast<std::size_t>(j)] /
               (1.0 + std::exp(-pre[static_cast<std::size_t>(j)]));
    return out;
}

/// Trailing moving average written directly from its definition.
inline std::vector<double> direct_trailing_mean(std::span<const double> y, int m) {
    std::vector<double> out;
    for (std::size_t t = static_cast<std::size_t>(m - 1); t < y.size(); ++t) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += y[t - static_cast<std::size_t>(i)];
        out.push_back(s / m);
    }
    return out;
}

/// Interior extrema counter independent of decomp::find_extrema.
inline std::size_t count_extrema(std::span<const double> y) {
    std::size_t count = 0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if ((y[i] > y[i - 1] && y[i] > y[i + 1]) || (y[i] < y[i - 1] && y[i] < y[i + 1]))
            ++count;
    }
    return count;
}

inline std::size_t count_sign_changes(std::span<const double> y) {
    std::size_t count = 0;
    double prev = 0.0;
    bool seen = false;
    for (double v : y) {
        if (v == 0.0) continue;
        if (seen && (prev > 0.0) != (v > 0.0)) ++count;
        prev = v;
        seen = true;
    }
    return count;
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace oracles

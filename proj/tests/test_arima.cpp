#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hybridcast/arima/arima.hpp"
#include "hybridcast/core/errors.hpp"
#include "hybridcast/core/linalg.hpp"
#include "hybridcast/core/rng.hpp"
#include "support/oracles.hpp"

using namespace hybridcast;

TEST_CASE("difference and undifference") {
    const std::vector<double> ramp{1, 2, 3, 4};
    CHECK(arima::difference(ramp, 1) == std::vector<double>{1, 1, 1});
    CHECK(arima::difference(ramp, 0) == ramp);
    CHECK_THROWS_AS(arima::difference(std::vector<double>{1.0}, 1), BoundsError);

    core::Rng rng(5);
    std::vector<double> x(40, 0.0);
    for (double& v : x) v = rng.normal(0.0, 3.0);
    for (int d = 1; d <= 2; ++d) {
        const auto diffed = arima::difference(x, d);
        const std::vector<double> seeds(x.begin(), x.begin() + d);
        const auto back = arima::undifference(diffed, seeds);
        REQUIRE(back.size() == x.size() - static_cast<std::size_t>(d));
        for (std::size_t i = 0; i < back.size(); ++i)
            CHECK(back[i] == doctest::Approx(x[i + static_cast<std::size_t>(d)]).epsilon(1e-12));
    }
}

TEST_CASE("ar recovery on simulated processes") {
    const double phi1[] = {0.7};
    const auto y1 = oracles::simulate_ar(phi1, 5000, 71);
    const auto m1 = arima::fit(y1, {1, 0, 0});
    CHECK(m1.ar_coeffs[0] == doctest::Approx(0.7).epsilon(0.07));
    CHECK(m1.stationary);

    const double phi2[] = {0.5, -0.3};
    const auto y2 = oracles::simulate_ar(phi2, 5000, 72);
    const auto m2 = arima::fit(y2, {2, 0, 0});
    CHECK(std::abs(m2.ar_coeffs[0] - 0.5) < 0.05);
    CHECK(std::abs(m2.ar_coeffs[1] + 0.3) < 0.05);

    // OLS residual mean with intercept is numerically zero.
    double rsum = 0.0;
    for (std::size_t i = m2.residual_offset; i < m2.residuals.size(); ++i)
        rsum += m2.residuals[i];
    const double scale = std::abs(y2[0]) + 1.0;
    CHECK(std::abs(rsum / static_cast<double>(m2.residuals.size() - m2.residual_offset)) /
              scale <
          1e-8);
}

TEST_CASE("css estimation handles ma terms") {
    // ARMA(1,1): y_t = 0.6 y_{t-1} + e_t - 0.4 e_{t-1}.
    core::Rng rng(99);
    std::vector<double> y(6000, 0.0);
    double prev_eps = 0.0;
    for (std::size_t t = 1; t < y.size(); ++t) {
        const double eps = rng.normal();
        y[t] = 0.6 * y[t - 1] + eps - 0.4 * prev_eps;
        prev_eps = eps;
    }
    const auto m = arima::fit(y, {1, 0, 1});
    CHECK(m.ar_coeffs[0] == doctest::Approx(0.6).epsilon(0.12));
    CHECK(m.ma_coeffs[0] == doctest::Approx(0.4).epsilon(0.15));
}

TEST_CASE("parametric bootstrap consistency") {
    const double phi[] = {0.55, -0.25};
    int within = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const auto sim = oracles::simulate_ar(phi, 3000, 500 + static_cast<std::uint64_t>(s));
        const auto fit = arima::fit(sim, {2, 0, 0});
        // Crude standard error for an AR coefficient at this sample size.
        const double se = 2.0 / std::sqrt(3000.0);
        if (std::abs(fit.ar_coeffs[0] - 0.55) < 2 * se &&
            std::abs(fit.ar_coeffs[1] + 0.25) < 2 * se)
            ++within;
    }
    CHECK(within >= 18);
}

namespace {

// Candidate scores built the way select_order scores them: least squares
// on lagged values plus long-AR residual proxies, one common window.
std::vector<std::pair<double, std::pair<int, int>>> hr_ranked(std::span<const double> w,
                                                              int p_max, int q_max) {
    const int n = static_cast<int>(w.size());
    const int long_order = std::max(
        p_max + q_max,
        static_cast<int>(std::floor(12.0 * std::pow(n / 100.0, 0.25))));
    const auto long_ar = arima::fit(w, {long_order, 0, 0});
    std::vector<double> proxy(w.size(), 0.0);
    for (std::size_t t = long_ar.residual_offset; t < proxy.size(); ++t)
        proxy[t] = long_ar.residuals[t];
    const int t0 = long_order + std::max(p_max, q_max);
    const std::size_t rows = static_cast<std::size_t>(n - t0);

    std::vector<std::pair<double, std::pair<int, int>>> ranked;
    for (int p = 0; p <= p_max; ++p) {
        for (int q = 0; q <= q_max; ++q) {
            if (p + q < 1) continue;
            core::Matrix x(rows, static_cast<std::size_t>(1 + p + q));
            std::vector<double> target(rows, 0.0);
            for (int t = t0; t < n; ++t) {
                const std::size_t r = static_cast<std::size_t>(t - t0);
                target[r] = w[static_cast<std::size_t>(t)];
                x(r, 0) = 1.0;
                for (int i = 1; i <= p; ++i)
                    x(r, static_cast<std::size_t>(i)) = w[static_cast<std::size_t>(t - i)];
                for (int j = 1; j <= q; ++j)
                    x(r, static_cast<std::size_t>(p + j)) =
                        proxy[static_cast<std::size_t>(t - j)];
            }
            try {
                const auto ls = core::ols(x, target);
                const double aic =
                    static_cast<double>(rows) * std::log(ls.rss / static_cast<double>(rows)) +
                    2.0 * (p + q + 1);
                ranked.push_back({aic, {p, q}});
            } catch (const Error&) {
            }
        }
    }
    std::sort(ranked.begin(), ranked.end());
    return ranked;
}

}  // namespace

TEST_CASE("order selection on simulated ar(3)") {
    const double phi[] = {0.4, -0.3, 0.25};
    int exact = 0;
    int top2 = 0;
    const int seeds = 25;
    for (int s = 0; s < seeds; ++s) {
        const auto sim = oracles::simulate_ar(phi, 2000, 900 + static_cast<std::uint64_t>(s));
        const auto order = arima::select_order(sim, 6, 2, 2);
        CHECK(order.d == 0);
        if (order.p == 3 && order.q == 0) ++exact;

        // Monotone consistency, judged with the same 2-unit equivalence
        // band the selection applies: the true order counts as top-2 when
        // at most one candidate beats it by more than the band.
        const auto ranked = hr_ranked(sim, 6, 2);
        double true_aic = 0.0;
        for (const auto& [aic, pq] : ranked)
            if (pq == std::pair<int, int>{3, 0}) true_aic = aic;
        int clearly_better = 0;
        for (const auto& [aic, pq] : ranked)
            if (aic < true_aic - 2.0) ++clearly_better;
        if (clearly_better <= 1) ++top2;
    }
    CHECK(exact >= 20);  // >= 80% of seeds
    CHECK(top2 >= 22);   // >= 90% of seeds within the (banded) top-2 ranks
}

TEST_CASE("stationary white noise selects d = 0") {
    const auto noise = oracles::white_noise(1200, 31);
    const auto order = arima::select_order(noise, 3, 2, 1);
    CHECK(order.d == 0);
}

TEST_CASE("one-step forecasts follow the model equation") {
    arima::ArimaModel model;
    model.order = {1, 0, 0};
    model.ar_coeffs = {0.5};
    model.intercept = 0.0;
    const std::vector<double> history{1.0, 3.0, 4.0};
    CHECK(arima::forecast_one_step(model, history) == doctest::Approx(2.0));

    arima::ArimaModel flat;
    flat.order = {1, 0, 0};
    flat.ar_coeffs = {0.0};
    flat.intercept = 2.5;
    CHECK(arima::forecast_one_step(flat, history) == doctest::Approx(2.5));

    CHECK_THROWS_AS(arima::forecast_one_step(model, std::vector<double>{}), BoundsError);
}

TEST_CASE("random walk forecast and rolling shift property") {
    CHECK(arima::random_walk_forecast(std::vector<double>{1.0, 2.0, 5.2}) == 5.2);
    CHECK(arima::random_walk_forecast(std::vector<double>{3.3}) == 3.3);
    CHECK_THROWS_AS(arima::random_walk_forecast(std::vector<double>{}), BoundsError);

    // Rolling one-step forecasts of a random walk equal the series shifted
    // by one.
    const auto walk = oracles::random_walk(200, 8);
    for (std::size_t t = 50; t < walk.size(); ++t) {
        CHECK(arima::random_walk_forecast(std::span<const double>(walk).subspan(0, t)) ==
              walk[t - 1]);
    }
}

TEST_CASE("rolling forecasts with differencing round-trip the scale") {
    // Random walk with drift: after d=1 the differences are iid, so the
    // one-step forecast is previous value + estimated drift.
    core::Rng rng(47);
    std::vector<double> y(800, 0.0);
    for (std::size_t t = 1; t < y.size(); ++t) y[t] = y[t - 1] + 0.5 + 0.1 * rng.normal();
    const auto model = arima::fit(std::span<const double>(y).subspan(0, 700), {1, 1, 0});
    const auto preds = arima::rolling_one_step(model, y, 700);
    REQUIRE(preds.size() == 100);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        CHECK(std::abs(preds[i] - (y[699 + i] + 0.5)) < 0.2);
    }
}

TEST_CASE("fit rejects invalid orders and degenerate designs") {
    const auto noise = oracles::white_noise(100, 3);
    CHECK_THROWS_AS(arima::fit(noise, {0, 0, 0}), ConfigError);
    CHECK_THROWS_AS(arima::fit(noise, {1, 3, 0}), BoundsError);
    CHECK_THROWS_AS(arima::fit(std::vector<double>(60, 2.0), {2, 0, 0}), RankError);
}

TEST_CASE("stationarity flag via reflection coefficients") {
    CHECK(arima::ar_polynomial_stationary(std::vector<double>{0.5}));
    CHECK(!arima::ar_polynomial_stationary(std::vector<double>{1.0}));
    CHECK(arima::ar_polynomial_stationary(std::vector<double>{0.5, -0.3}));
    CHECK(!arima::ar_polynomial_stationary(std::vector<double>{0.9, 0.2}));
}

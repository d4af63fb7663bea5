#include "hybridcast/arima/arima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hybridcast/core/adf.hpp"
#include "hybridcast/core/errors.hpp"
#include "hybridcast/core/linalg.hpp"
#include "hybridcast/core/stats.hpp"

namespace hybridcast::arima {

namespace {

constexpr double kBinomial[3][3] = {
    {1, 0, 0},
    {1, 1, 0},
    {1, 2, 1},
};

// Conditional sum of squares of an ARMA(p,q) with parameters
// [c, a_1..a_p, t_1..t_q]. Residuals before index p are fixed at zero and
// the first q residuals after the start are excluded from the objective,
// so the MA transient cannot be gamed into a lower sum.
double css_objective(std::span<const double> w, int p, int q, std::span<const double> params,
                     std::vector<double>* eps_out = nullptr) {
    const int n = static_cast<int>(w.size());
    const double c = params[0];
    std::vector<double> eps(static_cast<std::size_t>(n), 0.0);
    double ss = 0.0;
    for (int t = p; t < n; ++t) {
        double pred = c;
        for (int i = 1; i <= p; ++i) pred += params[static_cast<std::size_t>(i)] * w[t - i];
        for (int j = 1; j <= q; ++j) {
            const int idx = t - j;
            if (idx >= p) pred -= params[static_cast<std::size_t>(p + j)] * eps[idx];
        }
        eps[static_cast<std::size_t>(t)] = w[t] - pred;
        if (t >= p + q) ss += eps[static_cast<std::size_t>(t)] * eps[static_cast<std::size_t>(t)];
    }
    if (eps_out) *eps_out = std::move(eps);
    return ss;
}

std::vector<double> css_gradient(std::span<const double> w, int p, int q,
                                 std::span<const double> params) {
    const std::size_t k = params.size();
    std::vector<double> grad(k, 0.0);
    std::vector<double> shifted(params.begin(), params.end());
    for (std::size_t i = 0; i < k; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(params[i]));
        shifted[i] = params[i] + h;
        const double up = css_objective(w, p, q, shifted);
        shifted[i] = params[i] - h;
        const double down = css_objective(w, p, q, shifted);
        shifted[i] = params[i];
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

// BFGS with backtracking line search on the CSS objective.
std::vector<double> minimize_css(std::span<const double> w, int p, int q,
                                 std::vector<double> x0, int max_iters) {
    const std::size_t k = x0.size();
    std::vector<double> x = std::move(x0);
    double fx = css_objective(w, p, q, x);
    std::vector<double> g = css_gradient(w, p, q, x);

    core::Matrix h_inv(k, k);
    for (std::size_t i = 0; i < k; ++i) h_inv(i, i) = 1.0;

    std::vector<double> best_x = x;
    double best_f = fx;

    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<double> dir(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            double v = 0.0;
            for (std::size_t j = 0; j < k; ++j) v -= h_inv(i, j) * g[j];
            dir[i] = v;
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < k; ++i) slope += dir[i] * g[i];
        if (slope >= 0.0) {
            // Reset to steepest descent when curvature information degrades.
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) h_inv(i, j) = (i == j) ? 1.0 : 0.0;
            for (std::size_t i = 0; i < k; ++i) dir[i] = -g[i];
            slope = 0.0;
            for (std::size_t i = 0; i < k; ++i) slope += dir[i] * g[i];
            if (slope >= 0.0) break;  // gradient numerically zero
        }

        double step = 1.0;
        std::vector<double> x_new(k, 0.0);
        double f_new = fx;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t i = 0; i < k; ++i) x_new[i] = x[i] + step * dir[i];
            f_new = css_objective(w, p, q, x_new);
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> g_new = css_gradient(w, p, q, x_new);
        std::vector<double> s(k, 0.0), yv(k, 0.0);
        double sy = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            s[i] = x_new[i] - x[i];
            yv[i] = g_new[i] - g[i];
            sy += s[i] * yv[i];
        }
        if (sy > 1e-12) {
            // BFGS inverse update.
            std::vector<double> hy(k, 0.0);
            for (std::size_t i = 0; i < k; ++i) {
                double v = 0.0;
                for (std::size_t j = 0; j < k; ++j) v += h_inv(i, j) * yv[j];
                hy[i] = v;
            }
            double yhy = 0.0;
            for (std::size_t i = 0; i < k; ++i) yhy += yv[i] * hy[i];
            const double coef = (1.0 + yhy / sy) / sy;
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < k; ++j) {
                    h_inv(i, j) += coef * s[i] * s[j] - (hy[i] * s[j] + s[i] * hy[j]) / sy;
                }
            }
        }

        const double decrease = fx - f_new;
        x = std::move(x_new);
        fx = f_new;
        g = std::move(g_new);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
        if (decrease <= 1e-12 * std::max(1.0, std::abs(fx))) return best_x;

        if (iter == max_iters - 1)
            throw ConvergenceError("arima::fit: CSS minimisation hit the iteration cap",
                                   best_x);
    }
    return best_x;
}

// Forecast of the original-scale value at position i from the differenced
// prediction and the preceding original values.
double integrate_forecast(double diff_pred, std::span<const double> y, std::size_t i, int d) {
    double out = diff_pred;
    for (int k = 1; k <= d; ++k) {
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        out += sign * kBinomial[d][k] * y[i - static_cast<std::size_t>(k)];
    }
    return out;
}

}  // namespace

std::vector<double> difference(std::span<const double> y, int d) {
    if (d < 0 || d > 2) throw BoundsError("difference: d must be in 0..2");
    if (static_cast<std::size_t>(d) >= y.size())
        throw BoundsError("difference: order exceeds series length - 1");
    std::vector<double> out(y.begin(), y.end());
    for (int k = 0; k < d; ++k) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

std::vector<double> undifference(std::span<const double> diffed, std::span<const double> seeds) {
    const int d = static_cast<int>(seeds.size());
    if (d > 2) throw BoundsError("undifference: order exceeds 2");
    std::vector<double> out(diffed.begin(), diffed.end());
    // Rebuild one integration level at a time, innermost first.
    for (int level = d - 1; level >= 0; --level) {
        // Seed for this level: the (level)-fold difference of the original
        // seeds evaluated at the last seed position.
        double seed = 0.0;
        for (int k = 0; k <= level; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            seed += sign * kBinomial[level][k] * seeds[seeds.size() - 1 - static_cast<std::size_t>(k)];
        }
        double prev = seed;
        for (double& v : out) {
            prev += v;
            v = prev;
        }
    }
    return out;
}

namespace {

// Step-down recursion: the polynomial 1 - c_1 z - ... - c_k z^k has all
// roots outside the unit circle iff every reflection coefficient satisfies
// |kappa| < 1 - margin.
bool polynomial_roots_outside(std::span<const double> coeffs, double margin) {
    std::vector<double> phi(coeffs.begin(), coeffs.end());
    int k = static_cast<int>(phi.size());
    while (k > 0) {
        const double kappa = phi[static_cast<std::size_t>(k - 1)];
        if (std::abs(kappa) >= 1.0 - margin) return false;
        const double denom = 1.0 - kappa * kappa;
        std::vector<double> next(static_cast<std::size_t>(k - 1), 0.0);
        for (int j = 0; j < k - 1; ++j) {
            next[static_cast<std::size_t>(j)] =
                (phi[static_cast<std::size_t>(j)] +
                 kappa * phi[static_cast<std::size_t>(k - 2 - j)]) /
                denom;
        }
        phi = std::move(next);
        --k;
    }
    return true;
}

}  // namespace

bool ar_polynomial_stationary(std::span<const double> ar_coeffs) {
    return polynomial_roots_outside(ar_coeffs, 1e-12);
}

ArimaModel fit(std::span<const double> y, ArimaOrder order) {
    if (order.p < 0 || order.d < 0 || order.q < 0)
        throw BoundsError("arima::fit: negative order");
    if (order.d > 2) throw BoundsError("arima::fit: d must be at most 2");
    if (order.p + order.q < 1)
        throw ConfigError("arima::fit: p + q must be at least 1 (use random_walk_forecast "
                          "for the naive model)");

    const std::vector<double> w = difference(y, order.d);
    const int n = static_cast<int>(w.size());
    const int p = order.p;
    const int q = order.q;
    if (n <= p + q + 1)
        throw InsufficientDataError("arima::fit: series too short for requested order");

    ArimaModel model;
    model.order = order;

    if (q == 0) {
        // Least squares on the lagged design with intercept.
        const std::size_t rows = static_cast<std::size_t>(n - p);
        core::Matrix x(rows, static_cast<std::size_t>(p + 1));
        std::vector<double> target(rows, 0.0);
        for (int t = p; t < n; ++t) {
            const std::size_t r = static_cast<std::size_t>(t - p);
            target[r] = w[static_cast<std::size_t>(t)];
            x(r, 0) = 1.0;
            for (int i = 1; i <= p; ++i)
                x(r, static_cast<std::size_t>(i)) = w[static_cast<std::size_t>(t - i)];
        }
        core::OlsFit ls;
        try {
            ls = core::ols(x, target);
        } catch (const RankError&) {
            throw RankError("arima::fit: singular lagged design matrix");
        }
        model.intercept = ls.coeffs[0];
        model.ar_coeffs.assign(ls.coeffs.begin() + 1, ls.coeffs.end());
        model.residuals.assign(static_cast<std::size_t>(n), 0.0);
        for (std::size_t r = 0; r < rows; ++r)
            model.residuals[static_cast<std::size_t>(p) + r] = ls.residuals[r];
        model.residual_offset = static_cast<std::size_t>(p);
        model.sigma2 = ls.rss / static_cast<double>(rows);
        model.aic = static_cast<double>(rows) * std::log(model.sigma2) +
                    2.0 * static_cast<double>(p + 1);
    } else {
        // Conditional sum of squares; AR part seeded from least squares,
        // MA part from zero.
        std::vector<double> params(static_cast<std::size_t>(1 + p + q), 0.0);
        if (p > 0) {
            ArimaOrder ar_only{p, 0, 0};
            const ArimaModel seed = fit(w, ar_only);
            params[0] = seed.intercept;
            for (int i = 0; i < p; ++i)
                params[static_cast<std::size_t>(1 + i)] = seed.ar_coeffs[static_cast<std::size_t>(i)];
        } else {
            params[0] = core::mean(w);
        }
        params = minimize_css(w, p, q, std::move(params), 200);

        model.intercept = params[0];
        model.ar_coeffs.assign(params.begin() + 1, params.begin() + 1 + p);
        model.ma_coeffs.assign(params.begin() + 1 + p, params.end());
        std::vector<double> eps;
        const double css = css_objective(w, p, q, params, &eps);
        model.residuals = std::move(eps);
        model.residual_offset = static_cast<std::size_t>(p + q);
        const double n_eff = static_cast<double>(n - p - q);
        model.sigma2 = css / n_eff;
        model.aic = n_eff * std::log(model.sigma2) + 2.0 * static_cast<double>(p + q + 1);
    }

    model.stationary = ar_polynomial_stationary(model.ar_coeffs);
    const std::size_t tail =
        static_cast<std::size_t>(std::max(p, q) + order.d);
    const std::size_t keep = std::min(tail, y.size());
    model.history_tail.assign(y.end() - static_cast<std::ptrdiff_t>(keep), y.end());
    return model;
}

ArimaOrder select_order(std::span<const double> y, int p_max, int d_max, int q_max) {
    if (p_max < 0 || d_max < 0 || q_max < 0) throw BoundsError("select_order: negative bound");
    if (p_max + q_max < 1) throw ConfigError("select_order: empty model grid");

    int d = d_max;
    for (int cand = 0; cand <= d_max; ++cand) {
        const std::vector<double> w = difference(y, cand);
        try {
            if (core::adf_test(w).p_value < 0.05) {
                d = cand;
                break;
            }
        } catch (const Error&) {
            // Degenerate after differencing: treat as stationary enough.
            d = cand;
            break;
        }
    }

    const std::vector<double> w = difference(y, d);
    const int n = static_cast<int>(w.size());
    if (n <= 2 * (p_max + q_max) + 12)
        throw InsufficientDataError("select_order: series too short for the grid");

    // Hannan-Rissanen comparison: candidates are scored by least squares on
    // lagged values plus residual proxies from a long autoregression, so
    // every (p, q) is an ordinary regression on one common window and the
    // AIC differences behave like they should. (Scoring mixed orders by
    // their conditional sums of squares systematically favours
    // over-parameterised MA terms.) The selected order is then fitted by
    // OLS/CSS as usual.
    int long_order = std::max(
        p_max + q_max,
        static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25))));
    long_order = std::min(long_order, n / 4);

    std::vector<double> proxy(static_cast<std::size_t>(n), 0.0);
    while (long_order >= 1) {
        // Deterministic inputs can make the long autoregression exactly
        // collinear; shrink it until it fits. A zero proxy simply removes
        // the MA candidates from the running.
        try {
            const ArimaModel long_ar = fit(w, ArimaOrder{long_order, 0, 0});
            for (std::size_t t = long_ar.residual_offset; t < proxy.size(); ++t)
                proxy[t] = long_ar.residuals[t];
            break;
        } catch (const RankError&) {
            long_order /= 2;
        }
    }
    long_order = std::max(long_order, p_max + q_max);

    const int t0 = long_order + std::max(p_max, q_max);
    const std::size_t rows = static_cast<std::size_t>(n - t0);

    // Candidates within one equivalence band of the best are ties resolved
    // toward parsimony (smaller p+q, then smaller p).
    constexpr double kAicEquivalence = 2.0;
    double best_aic = std::numeric_limits<double>::infinity();
    ArimaOrder best{0, d, 0};
    bool found = false;
    for (int p = 0; p <= p_max; ++p) {
        for (int qq = 0; qq <= q_max; ++qq) {
            if (p + qq < 1) continue;
            const std::size_t cols = static_cast<std::size_t>(1 + p + qq);
            core::Matrix x(rows, cols);
            std::vector<double> target(rows, 0.0);
            for (int t = t0; t < n; ++t) {
                const std::size_t r = static_cast<std::size_t>(t - t0);
                target[r] = w[static_cast<std::size_t>(t)];
                x(r, 0) = 1.0;
                for (int i = 1; i <= p; ++i)
                    x(r, static_cast<std::size_t>(i)) = w[static_cast<std::size_t>(t - i)];
                for (int j = 1; j <= qq; ++j)
                    x(r, static_cast<std::size_t>(p + j)) =
                        proxy[static_cast<std::size_t>(t - j)];
            }
            double aic = 0.0;
            try {
                const core::OlsFit ls = core::ols(x, target);
                aic = static_cast<double>(rows) * std::log(ls.rss / static_cast<double>(rows)) +
                      2.0 * static_cast<double>(p + qq + 1);
            } catch (const Error&) {
                continue;  // singular candidate design
            }
            const bool tie = std::abs(aic - best_aic) <= kAicEquivalence;
            const bool better = (aic < best_aic - kAicEquivalence) ||
                                (tie && (p + qq < best.p + best.q ||
                                         (p + qq == best.p + best.q && p < best.p)));
            if (better) {
                best_aic = std::min(best_aic, aic);
                best = ArimaOrder{p, d, qq};
                found = true;
            }
        }
    }
    if (!found) throw ConfigError("select_order: no candidate in the grid could be fitted");
    return best;
}

std::size_t first_defined_index(const ArimaModel& model) {
    return static_cast<std::size_t>(model.order.d + model.order.p);
}

namespace {

// One-step predictions over the differenced series for t in
// [first_diff_t, w.size()]; index w.size() predicts the value after the end.
std::vector<double> predict_diff_range(const ArimaModel& model, std::span<const double> w,
                                       std::size_t first_diff_t, bool include_next) {
    const int p = model.order.p;
    const int q = model.order.q;
    const std::size_t n = w.size();
    const std::size_t count = n - first_diff_t + (include_next ? 1 : 0);
    std::vector<double> preds(count, 0.0);

    if (q == 0) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
            const std::size_t t = first_diff_t + static_cast<std::size_t>(k);
            double pred = model.intercept;
            for (int i = 1; i <= p; ++i)
                pred += model.ar_coeffs[static_cast<std::size_t>(i - 1)] * w[t - i];
            preds[static_cast<std::size_t>(k)] = pred;
        }
        return preds;
    }

    // Innovation filter: residuals must be rebuilt sequentially.
    std::vector<double> eps(n, 0.0);
    const std::size_t start = static_cast<std::size_t>(p);
    for (std::size_t t = start; t <= n; ++t) {
        if (t == n && !include_next) break;
        double pred = model.intercept;
        for (int i = 1; i <= p; ++i)
            pred += model.ar_coeffs[static_cast<std::size_t>(i - 1)] * w[t - i];
        for (int j = 1; j <= q; ++j) {
            const std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(t) - j;
            if (idx >= static_cast<std::ptrdiff_t>(start))
                pred -= model.ma_coeffs[static_cast<std::size_t>(j - 1)] *
                        eps[static_cast<std::size_t>(idx)];
        }
        if (t < n) eps[t] = w[t] - pred;
        if (t >= first_diff_t) preds[t - first_diff_t] = pred;
        if (t == n) break;
    }
    return preds;
}

std::vector<double> rolling_impl(const ArimaModel& model, std::span<const double> series,
                                 std::size_t first_index, bool parallel) {
    const int d = model.order.d;
    const std::size_t min_first = first_defined_index(model);
    if (first_index < min_first || first_index > series.size())
        throw BoundsError("rolling_one_step: first_index outside forecastable range");

    const std::vector<double> w = difference(series, d);
    const std::size_t first_diff_t = first_index - static_cast<std::size_t>(d);
    std::vector<double> diff_preds;
    if (parallel) {
        diff_preds = predict_diff_range(model, w, first_diff_t, false);
    } else {
        // Serial reference: identical arithmetic, plain loops.
        const int p = model.order.p;
        const int q = model.order.q;
        const std::size_t n = w.size();
        if (q == 0) {
            diff_preds.assign(n - first_diff_t, 0.0);
            for (std::size_t t = first_diff_t; t < n; ++t) {
                double pred = model.intercept;
                for (int i = 1; i <= p; ++i)
                    pred += model.ar_coeffs[static_cast<std::size_t>(i - 1)] * w[t - i];
                diff_preds[t - first_diff_t] = pred;
            }
        } else {
            diff_preds = predict_diff_range(model, w, first_diff_t, false);
        }
    }

    std::vector<double> out(diff_preds.size(), 0.0);
    for (std::size_t k = 0; k < diff_preds.size(); ++k) {
        const std::size_t i = first_index + k;
        out[k] = integrate_forecast(diff_preds[k], series, i, d);
    }
    return out;
}

}  // namespace

std::vector<double> rolling_one_step(const ArimaModel& model, std::span<const double> series,
                                     std::size_t first_index) {
    return rolling_impl(model, series, first_index, true);
}

std::vector<double> rolling_one_step_serial(const ArimaModel& model,
                                            std::span<const double> series,
                                            std::size_t first_index) {
    return rolling_impl(model, series, first_index, false);
}

std::vector<double> fitted_one_step(const ArimaModel& model, std::span<const double> series) {
    return rolling_one_step(model, series, first_defined_index(model));
}

double forecast_one_step(const ArimaModel& model, std::span<const double> history) {
    const int d = model.order.d;
    const std::size_t need = first_defined_index(model);
    if (history.size() < std::max<std::size_t>(need, 1))
        throw BoundsError("forecast_one_step: insufficient history");
    const std::vector<double> w = difference(history, d);
    const std::vector<double> preds = predict_diff_range(model, w, w.size(), true);
    return integrate_forecast(preds.back(), history, history.size(), d);
}

double random_walk_forecast(std::span<const double> history) {
    if (history.empty()) throw BoundsError("random_walk_forecast: empty history");
    return history.back();
}

}  // namespace hybridcast::arima

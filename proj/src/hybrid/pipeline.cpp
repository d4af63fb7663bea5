#include "hybridcast/hybrid/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>

#include "hybridcast/core/errors.hpp"
#include "hybridcast/decomp/ma_filter.hpp"
#include "hybridcast/mlp/multi_run.hpp"

namespace hybridcast::hybrid {

std::string to_string(Method m) {
    switch (m) {
        case Method::Arima: return "arima";
        case Method::Ann: return "ann";
        case Method::Zhang: return "zhang";
        case Method::KhasheiBijari: return "khashei_bijari";
        case Method::BabuReddy: return "babu_reddy";
        case Method::Proposed: return "proposed";
    }
    return "arima";
}

Method method_from_string(const std::string& s) {
    if (s == "arima") return Method::Arima;
    if (s == "ann") return Method::Ann;
    if (s == "zhang") return Method::Zhang;
    if (s == "khashei_bijari" || s == "khashei") return Method::KhasheiBijari;
    if (s == "babu_reddy" || s == "babu") return Method::BabuReddy;
    if (s == "proposed") return Method::Proposed;
    throw ConfigError("unknown method tag: " + s);
}

namespace {

std::vector<double> concat(const core::TimeSeries& train, const core::TimeSeries& test) {
    std::vector<double> full;
    full.reserve(train.size() + test.size());
    full.insert(full.end(), train.values.begin(), train.values.end());
    full.insert(full.end(), test.values.begin(), test.values.end());
    return full;
}

int auto_ma_cap(std::size_t train_len, int requested) {
    if (requested > 0) return requested;
    return std::min<int>(60, static_cast<int>(train_len) / 2 - 1);
}

/// A fitted linear model together with its one-step forecasts over the
/// grid it models; lhat[k] predicts grid index first + k from actuals.
struct LinearSide {
    arima::ArimaModel model;
    std::vector<double> lhat;
    std::size_t first = 0;
};

LinearSide fit_linear(std::span<const double> grid_full, std::size_t grid_train_len,
                      const std::optional<arima::ArimaOrder>& override_order,
                      const PipelineSpec& spec, const char* stage) {
    try {
        const std::span<const double> train_part = grid_full.subspan(0, grid_train_len);
        arima::ArimaOrder order =
            override_order ? *override_order
                           : arima::select_order(train_part, spec.order_p_max,
                                                 spec.order_d_max, spec.order_q_max);
        LinearSide out;
        try {
            out.model = arima::fit(train_part, order);
        } catch (const ConvergenceError&) {
            // Smoothed components can make mixed orders numerically nasty;
            // fall back to the best pure autoregression.
            order = arima::select_order(train_part, spec.order_p_max, spec.order_d_max, 0);
            out.model = arima::fit(train_part, order);
        }
        out.first = arima::first_defined_index(out.model);
        out.lhat = arima::rolling_one_step(out.model, grid_full, out.first);
        return out;
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(stage) + ": " + e.what());
    } catch (const Error& e) {
        throw Error(std::string(stage) + ": " + e.what());
    }
}

void linear_diagnostics(const LinearSide& lf, std::map<std::string, double>& diag,
                        const std::string& prefix) {
    diag[prefix + "p"] = lf.model.order.p;
    diag[prefix + "d"] = lf.model.order.d;
    diag[prefix + "q"] = lf.model.order.q;
    diag[prefix + "aic"] = lf.model.aic;
    diag[prefix + "stationary"] = lf.model.stationary ? 1.0 : 0.0;
}

mlp::TrainConfig seeded_config(const PipelineSpec& spec, std::uint64_t seed) {
    mlp::TrainConfig cfg = spec.train;
    cfg.seed = seed;
    cfg.validation_fraction = spec.validation_fraction;
    return cfg;
}

/// Tuning score: a single seeded training's MAE on its own held-out
/// validation rows (at least a fifth, drawn by the seeded permutation).
double validation_mae(const mlp::LagMatrix& train_matrix, int hidden, const PipelineSpec& spec) {
    mlp::TrainConfig cfg = seeded_config(spec, spec.seed_base);
    cfg.validation_fraction = std::max(cfg.validation_fraction, 0.2);
    cfg.shuffle_validation = true;
    const mlp::TrainResult tr = mlp::train(train_matrix, hidden, cfg);
    return tr.best_val_mae;
}

/// Per-seed closure that trains on the leading rows of `matrix` and
/// forecasts the remaining rows. `combine` may add a deterministic
/// component per test index.
struct NetPlan {
    mlp::LagMatrix matrix;            // train + test rows, in time order
    std::size_t train_rows = 0;       // rows belonging to the training window
    int hidden = 1;
    std::vector<double> additive;     // optional per-test-row offset (may be empty)
};

std::function<std::vector<double>(std::uint64_t)> make_net_forecaster(
    NetPlan plan, const PipelineSpec& spec) {
    auto shared = std::make_shared<NetPlan>(std::move(plan));
    return [shared, spec](std::uint64_t seed) {
        const mlp::LagMatrix train_part = mlp::head_rows(shared->matrix, shared->train_rows);
        const mlp::TrainResult tr = mlp::train(train_part, shared->hidden,
                                               seeded_config(spec, seed));
        const std::size_t n_test = shared->matrix.rows() - shared->train_rows;
        std::vector<double> out(n_test, 0.0);
        for (std::size_t i = 0; i < n_test; ++i) {
            out[i] = mlp::predict(tr.model, shared->matrix.row(shared->train_rows + i));
            if (!shared->additive.empty()) out[i] += shared->additive[i];
        }
        return out;
    };
}

PreparedPipeline make_arima(const core::TimeSeries& train, const core::TimeSeries& test,
                            const PipelineSpec& spec) {
    const std::vector<double> full = concat(train, test);
    const std::size_t n_train = train.size();
    PreparedPipeline out;
    out.stochastic = false;

    if (spec.random_walk) {
        std::vector<double> forecasts(test.size(), 0.0);
        for (std::size_t i = 0; i < test.size(); ++i) forecasts[i] = full[n_train - 1 + i];
        out.diagnostics["random_walk"] = 1.0;
        out.forecast = [forecasts](std::uint64_t) { return forecasts; };
        return out;
    }

    const LinearSide lf = fit_linear(full, n_train, spec.arima_order, spec, "arima");
    std::vector<double> forecasts(lf.lhat.begin() +
                                      static_cast<std::ptrdiff_t>(n_train - lf.first),
                                  lf.lhat.end());
    linear_diagnostics(lf, out.diagnostics, "arima_");
    out.forecast = [forecasts](std::uint64_t) { return forecasts; };
    return out;
}

PreparedPipeline make_ann(const core::TimeSeries& train, const core::TimeSeries& test,
                          const PipelineSpec& spec) {
    const std::vector<double> full = concat(train, test);
    const std::size_t n_train = train.size();

    int n_in = 4, n_hid = 4;
    if (spec.ann_arch) {
        std::tie(n_in, n_hid) = *spec.ann_arch;
    } else if (spec.compact_tuning) {
        // Input width by validation; hidden width follows the input layer.
        double best = std::numeric_limits<double>::infinity();
        for (int cand : {2, 4, 6, 8}) {
            mlp::LagMatrix m = mlp::build_lag_matrix({{"y", full, cand}});
            const std::size_t train_rows = n_train - m.first_target;
            try {
                const double score =
                    validation_mae(mlp::head_rows(m, train_rows), cand, spec);
                if (score < best) {
                    best = score;
                    n_in = cand;
                    n_hid = cand;
                }
            } catch (const Error&) {
                continue;
            }
        }
    }

    NetPlan plan;
    plan.matrix = mlp::build_lag_matrix({{"y", full, n_in}});
    plan.train_rows = n_train - plan.matrix.first_target;
    plan.hidden = n_hid;

    PreparedPipeline out;
    out.stochastic = true;
    out.diagnostics["ann_inputs"] = n_in;
    out.diagnostics["ann_hidden"] = n_hid;
    out.forecast = make_net_forecaster(std::move(plan), spec);
    return out;
}

PreparedPipeline make_zhang(const core::TimeSeries& train, const core::TimeSeries& test,
                            const PipelineSpec& spec) {
    const std::vector<double> full = concat(train, test);
    const std::size_t n_train = train.size();
    const LinearSide lf = fit_linear(full, n_train, spec.arima_order, spec, "zhang/linear");

    // Residual stream of the linear model, defined from lf.first onward.
    std::vector<double> resid(full.size() - lf.first, 0.0);
    for (std::size_t k = 0; k < resid.size(); ++k) resid[k] = full[lf.first + k] - lf.lhat[k];

    const int k_res = spec.residual_lags.value_or(4);
    NetPlan plan;
    plan.matrix = mlp::build_lag_matrix({{"resid", resid, k_res}});
    plan.train_rows = (n_train - lf.first) - plan.matrix.first_target;
    plan.hidden = spec.ann_hidden.value_or(static_cast<int>(plan.matrix.width));
    plan.additive.assign(lf.lhat.begin() + static_cast<std::ptrdiff_t>(n_train - lf.first),
                         lf.lhat.end());

    PreparedPipeline out;
    out.stochastic = true;
    linear_diagnostics(lf, out.diagnostics, "arima_");
    out.diagnostics["residual_lags"] = k_res;
    out.diagnostics["ann_hidden"] = plan.hidden;
    out.forecast = make_net_forecaster(std::move(plan), spec);
    return out;
}

PreparedPipeline make_khashei_bijari(const core::TimeSeries& train,
                                     const core::TimeSeries& test, const PipelineSpec& spec) {
    const std::vector<double> full = concat(train, test);
    const std::size_t n_train = train.size();
    const LinearSide lf = fit_linear(full, n_train, spec.arima_order, spec, "khashei/linear");

    const std::size_t base = lf.first;
    const std::vector<double> y_sub(full.begin() + static_cast<std::ptrdiff_t>(base),
                                    full.end());
    std::vector<double> resid(y_sub.size(), 0.0);
    for (std::size_t k = 0; k < resid.size(); ++k) resid[k] = y_sub[k] - lf.lhat[k];

    const auto build = [&](int a, int b) {
        return mlp::build_lag_matrix({{"y", y_sub, a}, {"resid", resid, b}},
                                     {{"linear_forecast", lf.lhat}});
    };

    // Lag counts are tuned on the validation slice unless overridden.
    int a = 0, b = 0;
    if (spec.proposed_lags) {
        std::tie(a, b) = *spec.proposed_lags;
    } else {
        double best = std::numeric_limits<double>::infinity();
        for (int ca : {2, 4, 6, 8}) {
            for (int cb : {1, 2, 4}) {
                mlp::LagMatrix m = build(ca, cb);
                const std::size_t train_rows = (n_train - base) - m.first_target;
                const mlp::LagMatrix train_m = mlp::head_rows(m, train_rows);
                try {
                    const double score = validation_mae(
                        train_m, spec.ann_hidden.value_or(static_cast<int>(m.width)), spec);
                    if (score < best) {
                        best = score;
                        a = ca;
                        b = cb;
                    }
                } catch (const Error&) {
                    continue;
                }
            }
        }
        if (a == 0) throw ConfigError("khashei/tuning: no lag combination was trainable");
    }

    NetPlan plan;
    plan.matrix = build(a, b);
    plan.train_rows = (n_train - base) - plan.matrix.first_target;
    plan.hidden = spec.ann_hidden.value_or(static_cast<int>(plan.matrix.width));

    PreparedPipeline out;
    out.stochastic = true;
    linear_diagnostics(lf, out.diagnostics, "arima_");
    out.diagnostics["y_lags"] = a;
    out.diagnostics["residual_lags"] = b;
    out.diagnostics["ann_hidden"] = plan.hidden;
    out.forecast = make_net_forecaster(std::move(plan), spec);
    return out;
}

struct MaSetup {
    decomp::MaDecomposition dec;
    int m = 0;
    double criterion = 0.0;
};

MaSetup resolve_ma(const core::TimeSeries& train, std::span<const double> full,
                   const PipelineSpec& spec, bool kurtosis_rule) {
    MaSetup out;
    const int cap = auto_ma_cap(train.size(), spec.ma_max_length);
    if (spec.ma_rule == MaRule::Fixed) {
        if (spec.fixed_ma_length < 1) throw ConfigError("ma_rule=fixed requires a length");
        out.m = spec.fixed_ma_length;
    } else if (kurtosis_rule) {
        const decomp::MaSearchResult r = decomp::find_ma_length_kurtosis(train.view(), cap);
        out.m = r.m;
        out.criterion = r.criterion;
    } else {
        try {
            const decomp::MaSearchResult r = decomp::find_ma_length_adf(train.view(), 0.05, cap);
            out.m = r.m;
            out.criterion = r.criterion;
        } catch (const SearchExhaustedError&) {
            if (!spec.ma_fallback_min) throw;
            out.m = 2;
            out.criterion = 1.0;
        }
    }
    out.dec = decomp::ma_filter(full, out.m);
    return out;
}

PreparedPipeline make_babu_reddy(const core::TimeSeries& train, const core::TimeSeries& test,
                                 const PipelineSpec& spec) {
    const std::vector<double> full = concat(train, test);
    const std::size_t n_train = train.size();
    const MaSetup ma = resolve_ma(train, full, spec, /*kurtosis_rule=*/true);
    const std::size_t offset = ma.dec.offset;
    const std::size_t l_train_len = n_train - offset;

    const LinearSide lf =
        fit_linear(ma.dec.linear_part, l_train_len, std::nullopt, spec, "babu_reddy/linear");

    const int k_res = spec.residual_lags.value_or(4);
    NetPlan plan;
    plan.matrix = mlp::build_lag_matrix({{"resid", ma.dec.residual_part, k_res}});
    plan.train_rows = l_train_len - plan.matrix.first_target;
    plan.hidden = spec.ann_hidden.value_or(static_cast<int>(plan.matrix.width));
    plan.additive.assign(lf.lhat.begin() + static_cast<std::ptrdiff_t>(l_train_len - lf.first),
                         lf.lhat.end());

    PreparedPipeline out;
    out.stochastic = true;
    out.diagnostics["ma_length"] = ma.m;
    out.diagnostics["kurtosis_distance"] = ma.criterion;
    linear_diagnostics(lf, out.diagnostics, "linear_");
    out.diagnostics["residual_lags"] = k_res;
    out.forecast = make_net_forecaster(std::move(plan), spec);
    return out;
}

PreparedPipeline make_proposed(const core::TimeSeries& train, const core::TimeSeries& test,
                               const PipelineSpec& spec) {
    const std::vector<double> full = concat(train, test);
    const std::size_t n_train = train.size();
    const MaSetup ma = resolve_ma(train, full, spec, /*kurtosis_rule=*/false);
    const std::size_t offset = ma.dec.offset;
    const std::size_t l_train_len = n_train - offset;

    const LinearSide lf =
        fit_linear(ma.dec.linear_part, l_train_len, std::nullopt, spec, "proposed/linear");

    // Earliest grid index where the linear forecast exists; every feature
    // series is re-based there.
    const std::size_t base = offset + lf.first;
    const std::vector<double> y_sub(full.begin() + static_cast<std::ptrdiff_t>(base),
                                    full.end());
    const std::vector<double> r_sub(ma.dec.residual_part.begin() +
                                        static_cast<std::ptrdiff_t>(lf.first),
                                    ma.dec.residual_part.end());
    const std::vector<double>& lhat_sub = lf.lhat;

    const auto build = [&](int a, int b) {
        std::vector<mlp::LagSource> sources;
        sources.push_back({"y", y_sub, a});
        if (b > 0) sources.push_back({"resid", r_sub, b});
        return mlp::build_lag_matrix(sources, {{"linear_forecast", lhat_sub}});
    };

    int a = 0, b = -1;
    if (spec.proposed_lags) {
        std::tie(a, b) = *spec.proposed_lags;
    } else {
        const std::vector<int> a_grid =
            spec.compact_tuning ? std::vector<int>{2, 4, 6, 8}
                                : std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        const std::vector<int> b_grid =
            spec.compact_tuning ? std::vector<int>{0, 2, 4}
                                : std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        double best = std::numeric_limits<double>::infinity();
        for (int ca : a_grid) {
            for (int cb : b_grid) {
                mlp::LagMatrix m = build(ca, cb);
                const std::size_t train_rows = (n_train - base) - m.first_target;
                const mlp::LagMatrix train_m = mlp::head_rows(m, train_rows);
                try {
                    const double score = validation_mae(
                        train_m, spec.ann_hidden.value_or(static_cast<int>(m.width)), spec);
                    if (score < best) {
                        best = score;
                        a = ca;
                        b = cb;
                    }
                } catch (const Error&) {
                    continue;
                }
            }
        }
        if (a == 0) throw ConfigError("proposed/tuning: no lag combination was trainable");
    }

    NetPlan plan;
    plan.matrix = build(a, b);
    plan.train_rows = (n_train - base) - plan.matrix.first_target;
    plan.hidden = spec.ann_hidden.value_or(static_cast<int>(plan.matrix.width));

    PreparedPipeline out;
    out.stochastic = true;
    out.diagnostics["ma_length"] = ma.m;
    out.diagnostics["post_filter_adf_p"] = ma.criterion;
    linear_diagnostics(lf, out.diagnostics, "linear_");
    out.diagnostics["y_lags"] = a;
    out.diagnostics["residual_lags"] = b;
    out.diagnostics["ann_hidden"] = plan.hidden;
    out.forecast = make_net_forecaster(std::move(plan), spec);
    return out;
}

}  // namespace

PreparedPipeline prepare_pipeline(const core::TimeSeries& train, const core::TimeSeries& test,
                                  const PipelineSpec& spec) {
    if (train.size() < 8) throw InsufficientDataError("pipeline: training series too short");
    if (test.size() < 2) throw InsufficientDataError("pipeline: test series too short");
    switch (spec.method) {
        case Method::Arima: return make_arima(train, test, spec);
        case Method::Ann: return make_ann(train, test, spec);
        case Method::Zhang: return make_zhang(train, test, spec);
        case Method::KhasheiBijari: return make_khashei_bijari(train, test, spec);
        case Method::BabuReddy: return make_babu_reddy(train, test, spec);
        case Method::Proposed: return make_proposed(train, test, spec);
    }
    throw ConfigError("pipeline: unknown method");
}

PipelineResult run_prepared(const PreparedPipeline& prepared, const core::TimeSeries& test,
                            const PipelineSpec& spec) {
    PipelineResult result;
    result.diagnostics = prepared.diagnostics;
    const int runs = prepared.stochastic ? std::max(1, spec.runs) : 1;
    result.forecasts_per_run.assign(static_cast<std::size_t>(runs), {});

    const auto runner = [&](std::uint64_t seed) {
        const std::size_t slot = static_cast<std::size_t>(seed - spec.seed_base);
        std::vector<double> f = prepared.forecast(seed);
        if (f.size() != test.size())
            throw ShapeError("pipeline: forecast length does not match the test window");
        const core::MetricReport m = core::evaluate(test.values, f);
        result.forecasts_per_run[slot] = std::move(f);
        return m;
    };

    const mlp::MultiRunResult agg = mlp::multi_run(runner, runs, spec.seed_base);
    result.per_run = agg.per_run;
    result.metrics_mean = agg.mean;
    result.metrics_std = agg.stddev;

    result.mean_forecast.assign(test.size(), 0.0);
    for (const auto& f : result.forecasts_per_run)
        for (std::size_t i = 0; i < f.size(); ++i) result.mean_forecast[i] += f[i];
    for (double& v : result.mean_forecast) v /= static_cast<double>(runs);
    result.diagnostics["runs"] = runs;
    return result;
}

PipelineResult run_pipeline(const core::TimeSeries& train, const core::TimeSeries& test,
                            const PipelineSpec& spec) {
    return run_prepared(prepare_pipeline(train, test, spec), test, spec);
}

}  // namespace hybridcast::hybrid

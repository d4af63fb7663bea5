#include "hybridcast/hybrid/emd_wrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hybridcast/core/errors.hpp"
#include "hybridcast/mlp/multi_run.hpp"

namespace hybridcast::hybrid {

namespace {

constexpr std::uint64_t kComponentSeedStride = 7919;

PipelineSpec component_spec(const PipelineSpec& inner) {
    // Per-component models are selected independently; dataset-level
    // overrides do not carry over.
    PipelineSpec spec = inner;
    spec.arima_order.reset();
    spec.random_walk = false;
    spec.ann_arch.reset();
    spec.ann_hidden.reset();
    spec.proposed_lags.reset();
    spec.fixed_ma_length = 0;
    if (spec.ma_rule == MaRule::Fixed) spec.ma_rule = MaRule::Adf;
    spec.ma_fallback_min = true;
    spec.compact_tuning = true;
    return spec;
}

core::TimeSeries component_series(std::span<const double> values, const std::string& name) {
    core::TimeSeries s;
    s.values.assign(values.begin(), values.end());
    s.name = name;
    return s;
}

PipelineResult run_joint(const PipelineSpec& inner, const core::TimeSeries& train,
                         const core::TimeSeries& test, const EmdWrapOptions& options) {
    std::vector<double> full;
    full.reserve(train.size() + test.size());
    full.insert(full.end(), train.values.begin(), train.values.end());
    full.insert(full.end(), test.values.begin(), test.values.end());

    const decomp::EmdResult dec = decomp::emd(full, options.emd);
    const std::size_t n_train = train.size();

    std::vector<std::vector<double>> components;
    for (const auto& imf : dec.imfs) components.push_back(imf);
    components.push_back(dec.residue);

    // A decomposition with no IMFs reduces to the inner pipeline itself.
    if (dec.imfs.empty()) {
        PipelineResult r = run_pipeline(train, test, inner);
        r.diagnostics["n_imfs"] = 0.0;
        return r;
    }

    const PipelineSpec cspec_template = component_spec(inner);
    std::vector<PreparedPipeline> prepared;
    std::map<std::string, double> diagnostics;
    diagnostics["n_imfs"] = static_cast<double>(dec.imfs.size());
    bool stochastic = false;

    for (std::size_t c = 0; c < components.size(); ++c) {
        const std::string cname =
            (c < dec.imfs.size()) ? "imf" + std::to_string(c + 1) : "residue";
        core::TimeSeries ctrain = component_series(
            std::span<const double>(components[c]).subspan(0, n_train), cname);
        core::TimeSeries ctest =
            component_series(std::span<const double>(components[c]).subspan(n_train), cname);
        PipelineSpec cspec = cspec_template;
        cspec.seed_base = inner.seed_base + kComponentSeedStride * (c + 1);
        try {
            PreparedPipeline p = prepare_pipeline(ctrain, ctest, cspec);
            stochastic = stochastic || p.stochastic;
            for (const auto& [key, value] : p.diagnostics)
                diagnostics[cname + "_" + key] = value;
            prepared.push_back(std::move(p));
        } catch (const Error& e) {
            throw Error("emd_wrap component " + cname + ": " + e.what());
        }
    }

    PipelineResult result;
    result.diagnostics = std::move(diagnostics);
    const int runs = stochastic ? std::max(1, inner.runs) : 1;
    result.forecasts_per_run.assign(static_cast<std::size_t>(runs), {});

    const auto runner = [&](std::uint64_t seed) {
        const std::uint64_t r = seed - inner.seed_base;
        std::vector<double> total(test.size(), 0.0);
        for (std::size_t c = 0; c < prepared.size(); ++c) {
            const std::uint64_t cseed = inner.seed_base + kComponentSeedStride * (c + 1) + r;
            const std::vector<double> f = prepared[c].forecast(cseed);
            for (std::size_t i = 0; i < total.size(); ++i) total[i] += f[i];
        }
        const core::MetricReport m = core::evaluate(test.values, total);
        result.forecasts_per_run[static_cast<std::size_t>(r)] = std::move(total);
        return m;
    };

    const mlp::MultiRunResult agg = mlp::multi_run(runner, runs, inner.seed_base);
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

PipelineResult run_causal(const PipelineSpec& inner, const core::TimeSeries& train,
                          const core::TimeSeries& test, const EmdWrapOptions& options) {
    if (inner.method != Method::Arima)
        throw ConfigError(
            "emd_wrap: the strict-causal mode supports the deterministic arima inner "
            "pipeline only");

    std::vector<double> history(train.values);
    std::vector<double> forecasts(test.size(), 0.0);
    int max_imfs_seen = 0;

    for (std::size_t i = 0; i < test.size(); ++i) {
        const decomp::EmdResult dec = decomp::emd(history, options.emd);
        std::vector<std::vector<double>> components;
        for (const auto& imf : dec.imfs) components.push_back(imf);
        components.push_back(dec.residue);
        max_imfs_seen = std::max(max_imfs_seen, static_cast<int>(dec.imfs.size()));

        double total = 0.0;
        for (const auto& comp : components) {
            try {
                const arima::ArimaOrder order = arima::select_order(
                    comp, std::min(inner.order_p_max, 8), inner.order_d_max, 0);
                const arima::ArimaModel model = arima::fit(comp, order);
                total += arima::forecast_one_step(model, comp);
            } catch (const Error&) {
                total += arima::random_walk_forecast(comp);
            }
        }
        forecasts[i] = total;
        history.push_back(test.values[i]);
    }

    PipelineResult result;
    result.forecasts_per_run.push_back(forecasts);
    result.mean_forecast = forecasts;
    result.per_run.push_back(core::evaluate(test.values, forecasts));
    result.metrics_mean = result.per_run.front();
    result.metrics_std = core::MetricReport{0.0, 0.0, 0.0, result.metrics_mean.n};
    result.diagnostics["causal"] = 1.0;
    result.diagnostics["max_imfs_seen"] = max_imfs_seen;
    result.diagnostics["runs"] = 1.0;
    return result;
}

}  // namespace

PipelineResult emd_wrap(const PipelineSpec& inner, const core::TimeSeries& train,
                        const core::TimeSeries& test, const EmdWrapOptions& options) {
    if (options.causal) return run_causal(inner, train, test, options);
    return run_joint(inner, train, test, options);
}

}  // namespace hybridcast::hybrid

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hybridcast/arima/arima.hpp"
#include "hybridcast/core/metrics.hpp"
#include "hybridcast/core/time_series.hpp"
#include "hybridcast/mlp/mlp.hpp"

namespace hybridcast::hybrid {

enum class Method { Arima, Ann, Zhang, KhasheiBijari, BabuReddy, Proposed };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

enum class MaRule { Adf, Kurtosis, Fixed };

/**
 * Everything needed to run one forecasting pipeline on a train/test pair.
 * Optional fields override the tuning or selection that would otherwise
 * resolve them; the train sub-config controls every network fit.
 */
struct PipelineSpec {
    Method method = Method::Arima;

    // Linear side.
    std::optional<arima::ArimaOrder> arima_order;
    bool random_walk = false;  // the naive "most recent observation" model
    int order_p_max = 12;
    int order_d_max = 1;
    int order_q_max = 1;

    // Nonlinear side.
    std::optional<std::pair<int, int>> ann_arch;       // (N, H) for the plain ANN
    std::optional<int> ann_hidden;                     // H override for hybrids
    std::optional<std::pair<int, int>> proposed_lags;  // (a, b) of the proposed net
    std::optional<int> residual_lags;                  // Zhang / Babu-Reddy net inputs

    // Decomposition.
    MaRule ma_rule = MaRule::Adf;
    int fixed_ma_length = 0;
    int ma_max_length = 0;       // 0 = min(train/2 - 1, 60)
    bool ma_fallback_min = false;  // fall back to m=2 when the ADF search fails
    bool compact_tuning = false;   // reduced lag grids (used per EMD component)

    // Execution.
    int runs = 50;
    std::uint64_t seed_base = 0;
    mlp::TrainConfig train;
    double validation_fraction = 0.2;
};

struct PipelineResult {
    std::vector<std::vector<double>> forecasts_per_run;  // one entry per run
    std::vector<double> mean_forecast;                   // elementwise mean over runs
    std::vector<core::MetricReport> per_run;
    core::MetricReport metrics_mean;
    core::MetricReport metrics_std;
    std::map<std::string, double> diagnostics;
};

/**
 * A pipeline reduced to its per-seed forecasting closure. Deterministic
 * methods ignore the seed and run once. The closure is safe to call
 * concurrently from multiple threads.
 */
struct PreparedPipeline {
    std::function<std::vector<double>(std::uint64_t seed)> forecast;
    bool stochastic = false;
    std::map<std::string, double> diagnostics;
};

/// Resolve selections and tuning, fit the deterministic parts, and return
/// the per-seed closure. Throws with a stage label on fitting failures.
PreparedPipeline prepare_pipeline(const core::TimeSeries& train, const core::TimeSeries& test,
                                  const PipelineSpec& spec);

/// Run a prepared pipeline over its seed set and aggregate metrics.
PipelineResult run_prepared(const PreparedPipeline& prepared, const core::TimeSeries& test,
                            const PipelineSpec& spec);

/// prepare + run in one call.
PipelineResult run_pipeline(const core::TimeSeries& train, const core::TimeSeries& test,
                            const PipelineSpec& spec);

}  // namespace hybridcast::hybrid

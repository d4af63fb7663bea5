#pragma once

#include <optional>
#include <string>
#include <utility>

#include "hybridcast/arima/arima.hpp"
#include "hybridcast/core/time_series.hpp"

namespace hybridcast::bench {

/**
 * One benchmark dataset: where it lives, how it is transformed, how it is
 * split, and the per-dataset model settings the experiments pin down.
 */
struct DatasetDescriptor {
    std::string name;
    std::string path;
    core::Transform transform = core::Transform::None;
    std::size_t train_len = 0;
    std::optional<std::size_t> expected_len;
    std::optional<std::string> sha256;  // checksum of the CSV when pinned

    std::optional<arima::ArimaOrder> arima_order;
    bool random_walk = false;
    std::optional<std::pair<int, int>> ann_arch;       // individual ANN (N, H)
    std::optional<std::pair<int, int>> proposed_lags;  // (a, b)
    std::optional<int> residual_lags;
    std::optional<int> fixed_ma_length;
    int ma_max_length = 0;

    /// Multiplier applied to MAE/MSE cells in emitted tables (e.g. 1e5 for
    /// series reported in the x1e-5 convention). MASE is never scaled.
    double report_scale = 1.0;

    // Per-dataset training schedule (0 / negative = inherit the globals).
    double learning_rate = 0.0;
    int max_epochs = 0;
    int patience = 0;
    double validation_fraction = -1.0;
};

/// Load, checksum-validate, length-check, and transform a dataset.
core::TimeSeries load_dataset(const DatasetDescriptor& descriptor);

}  // namespace hybridcast::bench

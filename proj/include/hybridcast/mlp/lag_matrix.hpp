#pragma once

#include <span>
#include <string>
#include <vector>

namespace hybridcast::mlp {

/// A series contributing its most recent `lags` values to each feature row.
/// All sources must be aligned on the same time grid (equal lengths).
struct LagSource {
    std::string name;
    std::vector<double> values;
    int lags = 0;
};

/// A feature read at the target time itself (e.g. a model forecast of t).
struct ExtraFeature {
    std::string name;
    std::vector<double> values;
};

/**
 * Supervised design built from lagged series.
 *
 * Row k targets time t = first_target + k; its features are, per source,
 * the values at t-1..t-lags (most recent first) followed by the extras
 * evaluated at t. Targets come from the first source.
 */
struct LagMatrix {
    std::size_t width = 0;
    std::vector<double> data;  // row-major rows() x width
    std::vector<double> targets;
    std::vector<std::string> feature_names;
    std::size_t first_target = 0;

    std::size_t rows() const { return targets.size(); }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data).subspan(i * width, width);
    }
};

LagMatrix build_lag_matrix(const std::vector<LagSource>& sources,
                           const std::vector<ExtraFeature>& extras = {});

/// Rows [0, n_head) of a matrix (used for train/validation splits).
LagMatrix head_rows(const LagMatrix& m, std::size_t n_head);

/// Rows [n_head, rows) of a matrix.
LagMatrix tail_rows(const LagMatrix& m, std::size_t n_head);

}  // namespace hybridcast::mlp

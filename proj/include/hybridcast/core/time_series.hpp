#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hybridcast::core {

/// Elementwise transform applied to a series; the tag records the last one.
enum class Transform { None, Log10, LogNatural };

std::string to_string(Transform t);
Transform transform_from_string(const std::string& s);

/**
 * Ordered real-valued observations with optional numeric time labels.
 *
 * Invariants: at least one value, all values finite, labels (when present)
 * have the same length as values and are strictly increasing.
 */
struct TimeSeries {
    std::vector<double> values;
    std::vector<double> labels;  // empty when unlabeled
    std::string name;
    Transform transform = Transform::None;

    std::size_t size() const { return values.size(); }
    bool has_labels() const { return !labels.empty(); }
    std::span<const double> view() const { return values; }
};

/// Validate invariants and build a series. Throws on violation.
TimeSeries make_series(std::vector<double> values, std::vector<double> labels = {},
                       std::string name = "", Transform transform = Transform::None);

/// Apply a logarithmic transform elementwise. Values must be positive;
/// the error message names the first offending index. Applying on top of
/// an existing transform is refused.
TimeSeries apply_transform(const TimeSeries& series, Transform kind);

/// Undo the recorded transform, restoring the original scale.
TimeSeries inverse_transform(const TimeSeries& series);

struct SplitSpec {
    std::size_t train_len = 0;
    double validation_fraction = 0.2;  // trailing portion of train
};

/// First train_len points and the remainder; concatenation reproduces the
/// input values and labels.
std::pair<TimeSeries, TimeSeries> split(const TimeSeries& series, const SplitSpec& spec);

/// Read a `label,value` CSV with a mandatory header row.
TimeSeries read_csv(const std::string& path, std::string name = "");

void write_csv(const TimeSeries& series, const std::string& path);

}  // namespace hybridcast::core

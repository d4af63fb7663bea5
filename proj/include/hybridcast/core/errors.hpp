#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hybridcast {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Index or length outside the valid range.
struct BoundsError : Error {
    using Error::Error;
};

/// Mismatched sequence lengths or widths.
struct ShapeError : Error {
    using Error::Error;
};

/// Input value outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Constant series, zero variance, or otherwise degenerate input.
struct DegenerateInputError : Error {
    using Error::Error;
};

/// Too few observations for the requested computation.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// Singular or rank-deficient design matrix.
struct RankError : Error {
    using Error::Error;
};

/// Misaligned feature sources.
struct AlignmentError : Error {
    using Error::Error;
};

/// Invalid configuration (empty grids, bad method tags, unreadable specs).
struct ConfigError : Error {
    using Error::Error;
};

/// File system or parse failure.
struct IoError : Error {
    using Error::Error;
};

/// Iterative optimisation hit its iteration cap; carries the best point found.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, std::vector<double> best)
        : Error(what), best_so_far(std::move(best)) {}
    std::vector<double> best_so_far;
};

/// Search over a discrete grid found no admissible candidate; carries the
/// best criterion value seen.
struct SearchExhaustedError : Error {
    SearchExhaustedError(const std::string& what, double best)
        : Error(what), best_value(best) {}
    double best_value;
};

/// Neural-network training diverged; carries the epoch index.
struct TrainingError : Error {
    TrainingError(const std::string& what, int epoch_index)
        : Error(what), epoch(epoch_index) {}
    int epoch;
};

}  // namespace hybridcast

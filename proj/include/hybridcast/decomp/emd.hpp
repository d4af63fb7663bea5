#pragma once

#include <span>
#include <vector>

namespace hybridcast::decomp {

/// Sifting controls. Boundary extension mirrors two extrema at each end.
struct EmdConfig {
    double sd_threshold = 0.2;
    int max_sift_iters = 100;
    int max_imfs = 16;
};

/**
 * Empirical mode decomposition: ordered intrinsic mode functions plus the
 * final residue. sum_i imfs[i][t] + residue[t] reconstructs the input at
 * every t.
 */
struct EmdResult {
    std::vector<std::vector<double>> imfs;
    std::vector<double> residue;
    std::vector<int> sift_counts;
};

/**
 * Decompose by spline-envelope sifting: locate interior extrema, build
 * upper and lower cubic-spline envelopes over mirror-extended extrema,
 * subtract the envelope mean until the standard-deviation criterion drops
 * below sd_threshold, and repeat on the remainder until it has fewer than
 * two interior extrema. A series with no usable extrema yields zero IMFs
 * and residue equal to the input.
 */
EmdResult emd(std::span<const double> y, const EmdConfig& config = {});

/// Indices of interior local maxima and minima (plateaus use the midpoint).
struct ExtremaSet {
    std::vector<std::size_t> maxima;
    std::vector<std::size_t> minima;
};
ExtremaSet find_extrema(std::span<const double> y);

/// Count of sign changes, ignoring exact zeros.
std::size_t zero_crossings(std::span<const double> y);

}  // namespace hybridcast::decomp

#pragma once

#include <span>
#include <vector>

namespace hybridcast::decomp {

/**
 * Natural cubic spline through strictly increasing knots, used for the
 * EMD envelope construction. Evaluation extrapolates with the boundary
 * cubic when queried outside the knot range.
 */
class CubicSpline {
public:
    CubicSpline(std::span<const double> x, std::span<const double> y);

    double operator()(double xq) const;

    /// Evaluate at 0, 1, ..., n-1. OpenMP path; identical to the serial twin.
    std::vector<double> sample_grid(std::size_t n) const;

    /// Reference implementation of sample_grid (plain loop).
    std::vector<double> sample_grid_serial(std::size_t n) const;

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace hybridcast::decomp

#include "hybridcast/decomp/spline.hpp"

#include <algorithm>
#include <cstddef>

#include "hybridcast/core/errors.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace hybridcast::decomp {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    const std::size_t n = x_.size();
    if (n != y_.size()) throw ShapeError("spline: x and y lengths differ");
    if (n < 2) throw InsufficientDataError("spline: need at least two knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw DomainError("spline: knots must be strictly increasing");

    m_.assign(n, 0.0);
    if (n == 2) return;  // linear segment, second derivatives zero

    // Tridiagonal system for natural end conditions (Thomas algorithm).
    const std::size_t interior = n - 2;
    std::vector<double> diag(interior), upper(interior), rhs(interior);
    for (std::size_t i = 0; i < interior; ++i) {
        const double h0 = x_[i + 1] - x_[i];
        const double h1 = x_[i + 2] - x_[i + 1];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0);
    }
    for (std::size_t i = 1; i < interior; ++i) {
        const double lower = x_[i + 1] - x_[i];
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    m_[interior] = rhs[interior - 1] / diag[interior - 1];
    for (std::size_t i = interior - 1; i > 0; --i)
        m_[i] = (rhs[i - 1] - upper[i - 1] * m_[i + 1]) / diag[i - 1];
}

double CubicSpline::operator()(double xq) const {
    const std::size_t n = x_.size();
    // Segment lookup; queries outside the range use the boundary segment.
    std::size_t hi = static_cast<std::size_t>(
        std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin());
    hi = std::clamp<std::size_t>(hi, 1, n - 1);
    const std::size_t lo = hi - 1;

    const double h = x_[hi] - x_[lo];
    const double a = (x_[hi] - xq) / h;
    const double b = (xq - x_[lo]) / h;
    return a * y_[lo] + b * y_[hi] +
           ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * (h * h) / 6.0;
}

std::vector<double> CubicSpline::sample_grid(std::size_t n) const {
    std::vector<double> out(n, 0.0);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        out[static_cast<std::size_t>(i)] = (*this)(static_cast<double>(i));
    return out;
}

std::vector<double> CubicSpline::sample_grid_serial(std::size_t n) const {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(static_cast<double>(i));
    return out;
}

}  // namespace hybridcast::decomp

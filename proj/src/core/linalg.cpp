#include "hybridcast/core/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "hybridcast/core/errors.hpp"

namespace hybridcast::core {

namespace {

// In-place lower Cholesky factor of a symmetric matrix.
void cholesky_inplace(Matrix& a) {
    const std::size_t n = a.rows;
    std::vector<double> original_diag(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) original_diag[j] = a(j, j);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
        // Relative pivot tolerance: exact collinearity often leaves a tiny
        // positive residue from rounding.
        if (!(diag > 1e-12 * std::max(original_diag[j], 1e-300)) || !std::isfinite(diag))
            throw RankError("cholesky: matrix not positive definite");
        const double ljj = std::sqrt(diag);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= a(i, k) * a(j, k);
            a(i, j) = v / ljj;
        }
    }
}

std::vector<double> cholesky_solve(const Matrix& l, std::vector<double> b) {
    const std::size_t n = l.rows;
    // Forward substitution L z = b.
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * b[k];
        b[i] = v / l(i, i);
    }
    // Back substitution L^T x = z.
    for (std::size_t ii = n; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * b[k];
        b[ii] = v / l(ii, ii);
    }
    return b;
}

}  // namespace

std::vector<double> solve_spd(Matrix a, std::vector<double> b) {
    if (a.rows != a.cols || a.rows != b.size()) throw ShapeError("solve_spd: dimension mismatch");
    cholesky_inplace(a);
    return cholesky_solve(a, std::move(b));
}

Matrix invert_spd(const Matrix& a) {
    if (a.rows != a.cols) throw ShapeError("invert_spd: matrix not square");
    Matrix l = a;
    cholesky_inplace(l);
    const std::size_t n = a.rows;
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        const std::vector<double> col = cholesky_solve(l, std::move(e));
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

OlsFit ols(const Matrix& x, std::span<const double> y) {
    if (x.rows != y.size()) throw ShapeError("ols: row count does not match target length");
    if (x.rows < x.cols) throw InsufficientDataError("ols: fewer rows than columns");
    const std::size_t n = x.rows;
    const std::size_t k = x.cols;

    Matrix xtx(k, k);
    std::vector<double> xty(k, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const double* row = &x.data[t * k];
        for (std::size_t i = 0; i < k; ++i) {
            xty[i] += row[i] * y[t];
            for (std::size_t j = i; j < k; ++j) xtx(i, j) += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j) xtx(i, j) = xtx(j, i);

    Matrix xtx_inv;
    try {
        xtx_inv = invert_spd(xtx);
    } catch (const RankError&) {
        throw RankError("ols: singular design matrix");
    }

    OlsFit fit;
    fit.coeffs.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < k; ++j) v += xtx_inv(i, j) * xty[j];
        fit.coeffs[i] = v;
    }

    fit.residuals.assign(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const double* row = &x.data[t * k];
        double pred = 0.0;
        for (std::size_t i = 0; i < k; ++i) pred += row[i] * fit.coeffs[i];
        fit.residuals[t] = y[t] - pred;
        fit.rss += fit.residuals[t] * fit.residuals[t];
    }
    fit.sigma2 = (n > k) ? fit.rss / static_cast<double>(n - k) : 0.0;
    fit.std_errors.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) fit.std_errors[i] = std::sqrt(fit.sigma2 * xtx_inv(i, i));
    return fit;
}

}  // namespace hybridcast::core

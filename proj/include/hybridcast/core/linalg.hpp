#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hybridcast::core {

/**
 * Dense row-major matrix just big enough for the regression problems in
 * this library (design matrices with at most a couple dozen columns).
 */
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Solve the symmetric positive definite system A x = b by Cholesky.
/// Throws RankError when A is not positive definite.
std::vector<double> solve_spd(Matrix a, std::vector<double> b);

/// Invert a symmetric positive definite matrix. Throws RankError on failure.
Matrix invert_spd(const Matrix& a);

struct OlsFit {
    std::vector<double> coeffs;
    std::vector<double> std_errors;
    std::vector<double> residuals;
    double rss = 0.0;
    double sigma2 = 0.0;  // rss / (n - k)
};

/**
 * Ordinary least squares of y on the columns of x via normal equations.
 * Small ridge jitter is NOT applied; a singular cross-product matrix
 * raises RankError.
 */
OlsFit ols(const Matrix& x, std::span<const double> y);

}  // namespace hybridcast::core

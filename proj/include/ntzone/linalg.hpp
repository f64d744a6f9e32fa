#pragma once

#include <cstddef>
#include <vector>

namespace ntzone::la {

using Vec = std::vector<double>;

// Dense square matrix, row-major. Dimensions here are the number of risky
// assets, so d is tiny (<= 8 in practice); no blocking or clever storage.
struct Mat {
    std::size_t n = 0;
    std::vector<double> a; // n*n, row-major

    Mat() = default;
    explicit Mat(std::size_t n_, double fill = 0.0) : n(n_), a(n_ * n_, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    static Mat identity(std::size_t n);
};

Mat operator*(const Mat& x, const Mat& y);
Mat operator+(const Mat& x, const Mat& y);
Mat operator-(const Mat& x, const Mat& y);
Mat scale(const Mat& x, double s);
Mat transpose(const Mat& x);
Vec matvec(const Mat& x, const Vec& v);
double dot(const Vec& x, const Vec& y);
double frobenius(const Mat& x);
Mat outer(const Vec& x, const Vec& y);

// Symmetrize (x + x^T)/2; used before eigendecomposition to shed rounding skew.
Mat symmetrize(const Mat& x);

// Cholesky factor L (lower triangular, LL^T = x). Throws DegenerateRegion if x
// is not positive definite. Deterministic.
Mat cholesky(const Mat& x);

// Solve x * out = b for symmetric positive definite x via Cholesky.
Vec solve_spd(const Mat& x, const Vec& b);

struct EigenSym {
    Vec values;  // ascending
    Mat vectors; // columns are eigenvectors, same order as values
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps. Converges
// when the off-diagonal Frobenius mass falls below 1e-13 times the matrix
// norm. Fixed sweep order and a sign convention on the vectors (largest-|.|
// component positive) make the output deterministic. Throws NoConvergence
// if 64 sweeps are not enough (cannot happen for the d <= 8 inputs here).
EigenSym jacobi_eigensym(const Mat& x);

// Singular values of a general square matrix, ascending: sqrt of the
// eigenvalues of x^T x (clamped at 0).
Vec singular_values(const Mat& x);

} // namespace ntzone::la

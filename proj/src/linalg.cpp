#include "ntzone/linalg.hpp"

#include "ntzone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ntzone::la {

Mat Mat::identity(std::size_t n) {
    Mat m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

static void check_same(const Mat& x, const Mat& y) {
    if (x.n != y.n) fail(ErrKind::dimension, "matrix dimension mismatch");
}

Mat operator*(const Mat& x, const Mat& y) {
    check_same(x, y);
    Mat out(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t k = 0; k < x.n; ++k) {
            const double xik = x(i, k);
            for (std::size_t j = 0; j < x.n; ++j) out(i, j) += xik * y(k, j);
        }
    return out;
}

Mat operator+(const Mat& x, const Mat& y) {
    check_same(x, y);
    Mat out(x.n);
    for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] + y.a[i];
    return out;
}

Mat operator-(const Mat& x, const Mat& y) {
    check_same(x, y);
    Mat out(x.n);
    for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] - y.a[i];
    return out;
}

Mat scale(const Mat& x, double s) {
    Mat out = x;
    for (double& v : out.a) v *= s;
    return out;
}

Mat transpose(const Mat& x) {
    Mat out(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t j = 0; j < x.n; ++j) out(j, i) = x(i, j);
    return out;
}

Vec matvec(const Mat& x, const Vec& v) {
    if (v.size() != x.n) fail(ErrKind::dimension, "matvec dimension mismatch");
    Vec out(x.n, 0.0);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t j = 0; j < x.n; ++j) out[i] += x(i, j) * v[j];
    return out;
}

double dot(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) fail(ErrKind::dimension, "dot dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double frobenius(const Mat& x) {
    double s = 0.0;
    for (double v : x.a) s += v * v;
    return std::sqrt(s);
}

Mat outer(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) fail(ErrKind::dimension, "outer dimension mismatch");
    Mat out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) out(i, j) = x[i] * y[j];
    return out;
}

Mat symmetrize(const Mat& x) {
    Mat out(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t j = 0; j < x.n; ++j) out(i, j) = 0.5 * (x(i, j) + x(j, i));
    return out;
}

Mat cholesky(const Mat& x) {
    const std::size_t n = x.n;
    Mat l(n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = x(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0)) fail(ErrKind::degenerate_region, "matrix not positive definite");
        l(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = x(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

Vec solve_spd(const Mat& x, const Vec& b) {
    const Mat l = cholesky(x);
    const std::size_t n = x.n;
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) { // forward: L y = b
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    Vec out(n);
    for (std::size_t ii = n; ii-- > 0;) { // back: L^T out = y
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * out[k];
        out[ii] = s / l(ii, ii);
    }
    return out;
}

static double offdiag_norm(const Mat& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t j = 0; j < x.n; ++j)
            if (i != j) s += x(i, j) * x(i, j);
    return std::sqrt(s);
}

EigenSym jacobi_eigensym(const Mat& input) {
    Mat a = symmetrize(input);
    const std::size_t n = a.n;
    Mat v = Mat::identity(n);
    const double norm = std::max(frobenius(a), 1e-300);
    const double tol = 1e-13 * norm;

    bool converged = (n < 2) || offdiag_norm(a) <= tol;
    for (int sweep = 0; sweep < 64 && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-2 * tol / double(n)) continue;
                // Classic 2x2 rotation zeroing a(p,q).
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
        converged = offdiag_norm(a) <= tol;
    }
    if (!converged) fail(ErrKind::no_convergence, "jacobi eigensolver did not converge");

    EigenSym out;
    out.values.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    out.vectors = Mat(n);
    for (std::size_t jj = 0; jj < n; ++jj) {
        const std::size_t src = order[jj];
        out.values[jj] = a(src, src);
        // Sign convention: component of largest magnitude is positive.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(v(i, src)) > std::abs(v(imax, src))) imax = i;
        const double sgn = v(imax, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, jj) = sgn * v(i, src);
    }
    return out;
}

Vec singular_values(const Mat& x) {
    const Mat xtx = transpose(x) * x;
    EigenSym es = jacobi_eigensym(xtx);
    Vec out(es.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(std::max(es.values[i], 0.0));
    return out;
}

} // namespace ntzone::la

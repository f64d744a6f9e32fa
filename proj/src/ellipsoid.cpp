#include "ntzone/ellipsoid.hpp"

#include "ntzone/errors.hpp"

#include <cmath>

namespace ntzone {

std::pair<la::Mat, la::Mat> rescaled_matrices(const MertonSolution& sol,
                                              const MarketParams& market) {
    if (sol.d() != market.d()) fail(ErrKind::dimension, "solution/market dimension mismatch");
    const la::Mat A = la::symmetrize(sol.alpha * la::transpose(sol.alpha));
    const la::Mat Sigma = la::symmetrize(market.sigma * la::transpose(market.sigma));
    const la::EigenSym es = la::jacobi_eigensym(A);
    if (!(es.values.front() > 1e-14 * es.values.back()))
        fail(ErrKind::degenerate_region, "rescaled covariance A is numerically singular");
    // The eigenvalue ratio cannot flag a fully invested market (weights summing
    // to one within rounding): there the projection I - pi 1^T cancels the
    // loadings uniformly and A is a tiny multiple of noise. Compare against the
    // unprojected loadings diag(pi) sigma to catch that cancellation.
    double tr_a = 0.0, dsq = 0.0;
    for (std::size_t i = 0; i < A.n; ++i) {
        tr_a += A(i, i);
        for (std::size_t j = 0; j < A.n; ++j) {
            const double dij = sol.pi_m[i] * market.sigma(i, j);
            dsq += dij * dij;
        }
    }
    if (!(tr_a > 1e-16 * dsq))
        fail(ErrKind::degenerate_region, "rescaled covariance A is numerically singular");
    return {A, Sigma};
}

double riccati_residual(const la::Mat& M, const la::Mat& A, const la::Mat& Sigma, double gamma) {
    const la::Mat AM = A * M;
    double tr = 0.0;
    for (std::size_t i = 0; i < AM.n; ++i) tr += AM(i, i);
    const la::Mat lhs = la::scale(M, 4.0 * tr) + la::scale(M * AM, 8.0);
    const la::Mat rhs = la::scale(Sigma, gamma);
    return la::frobenius(lhs - rhs) / la::frobenius(rhs);
}

la::Mat solve_riccati(const la::Mat& A, const la::Mat& Sigma, double gamma) {
    if (A.n != Sigma.n) fail(ErrKind::dimension, "A and Sigma must have the same dimension");
    if (!(gamma > 0.0)) fail(ErrKind::bad_input, "gamma must be positive");
    const std::size_t d = A.n;

    // Whiten A: with A = V diag(zeta) V^T, the change of basis
    // M~ = diag(zeta^{1/2}) V^T M V diag(zeta^{1/2}) turns the equation into
    // 4 M~ Tr[M~] + 8 M~^2 = Sigma~, Sigma~ = gamma diag(zeta^{1/2}) V^T Sigma V diag(zeta^{1/2}).
    const la::EigenSym ea = la::jacobi_eigensym(A);
    if (!(ea.values.front() > 1e-14 * ea.values.back()))
        fail(ErrKind::degenerate_region, "rescaled covariance A is numerically singular");

    la::Mat vt = la::transpose(ea.vectors);
    la::Mat sig_t = vt * Sigma * ea.vectors; // V^T Sigma V
    la::Mat sig_tilde(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            sig_tilde(i, j) = gamma * std::sqrt(ea.values[i]) * std::sqrt(ea.values[j]) * sig_t(i, j);

    // Sigma~ and M~ share eigenvectors: with s_i the eigenvalues of Sigma~,
    // the eigenvalues of M~ solve 8 m_i^2 + 4 t m_i = s_i at t = sum_j m_j.
    const la::EigenSym es = la::jacobi_eigensym(la::symmetrize(sig_tilde));
    if (!(es.values.front() > 0.0))
        fail(ErrKind::degenerate_region, "transformed Sigma is not positive definite");

    const auto m_of = [&](double t, std::size_t i) {
        return (-t + std::sqrt(t * t + 2.0 * es.values[i])) / 4.0;
    };
    const auto gap = [&](double t) { // sum_i m_i(t) - t, strictly decreasing
        double s = -t;
        for (std::size_t i = 0; i < d; ++i) s += m_of(t, i);
        return s;
    };

    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < d; ++i) hi += std::sqrt(es.values[i] / 8.0);
    if (!(gap(hi) <= 0.0)) fail(ErrKind::no_convergence, "trace fixed point not bracketed");
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        t = 0.5 * (lo + hi);
        if (t == lo || t == hi) break; // bracket is one ulp wide; t is as good as it gets
        (gap(t) > 0.0 ? lo : hi) = t;
    }

    la::Mat m_tilde(d);
    { // P diag(m_i) P^T in the whitened basis
        la::Mat pm = es.vectors;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) pm(i, j) *= m_of(t, j);
        m_tilde = pm * la::transpose(es.vectors);
    }

    // Undo the whitening: M = V diag(zeta^{-1/2}) M~ diag(zeta^{-1/2}) V^T.
    la::Mat inner(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            inner(i, j) = m_tilde(i, j) / (std::sqrt(ea.values[i]) * std::sqrt(ea.values[j]));
    la::Mat M = la::symmetrize(ea.vectors * inner * vt);

    // The whitening round trip amplifies rounding by roughly cond(A), which can
    // leave ill-conditioned inputs short of the residual gate below. Newton steps
    // on the original equation recover it: the correction H of
    //   4 t H + 4 M Tr[A H] + 8 (H A M + M A H) = gamma Sigma - 4 t M - 8 M A M
    // is diagonal apart from a rank-one trace coupling in the eigenbasis of M~,
    // so each step costs two basis changes and an entrywise solve.
    for (int pass = 0; pass < 2; ++pass) {
        const la::Mat AM = A * M;
        double tau = 0.0;
        for (std::size_t i = 0; i < d; ++i) tau += AM(i, i);
        const la::Mat R =
            la::scale(Sigma, gamma) - (la::scale(M, 4.0 * tau) + la::scale(M * AM, 8.0));

        la::Mat rt = vt * R * ea.vectors; // R~ = diag(zeta^{1/2}) V^T R V diag(zeta^{1/2})
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                rt(i, j) *= std::sqrt(ea.values[i]) * std::sqrt(ea.values[j]);
        la::Mat rbar = la::transpose(es.vectors) * rt * es.vectors;

        double coupling = 1.0, traced = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double mk = m_of(t, k);
            coupling += 4.0 * mk / (4.0 * t + 16.0 * mk);
            traced += rbar(k, k) / (4.0 * t + 16.0 * mk);
        }
        const double trace_h = traced / coupling;

        la::Mat hbar(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const double mi = m_of(t, i), mj = m_of(t, j);
                hbar(i, j) = (i == j)
                                 ? (rbar(i, i) - 4.0 * mi * trace_h) / (4.0 * t + 16.0 * mi)
                                 : rbar(i, j) / (4.0 * t + 8.0 * (mi + mj));
            }

        la::Mat ht = es.vectors * hbar * la::transpose(es.vectors);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                ht(i, j) /= std::sqrt(ea.values[i]) * std::sqrt(ea.values[j]);
        M = la::symmetrize(M + ea.vectors * ht * vt);
    }

    const double res = riccati_residual(M, A, Sigma, gamma);
    if (!(res <= 1e-10))
        fail(ErrKind::residual_too_large, "matrix equation residual above 1e-10");
    return M;
}

NoTradeEllipsoid ellipsoid_solution(const MertonSolution& sol, const Preferences& prefs,
                                    const MarketParams& market) {
    auto [A, Sigma] = rescaled_matrices(sol, market);
    NoTradeEllipsoid e;
    e.A = A;
    e.pi_m = sol.pi_m;
    e.M = solve_riccati(A, Sigma, prefs.gamma);
    const la::Mat AM = A * e.M;
    double tr = 0.0;
    for (std::size_t i = 0; i < AM.n; ++i) tr += AM(i, i);
    e.a0_tilde = 2.0 * tr;
    e.residual = riccati_residual(e.M, A, Sigma, prefs.gamma);
    const double nu = nu_exponent(sol, prefs, market, 0.5 - prefs.gamma);
    if (!(nu > 0.0))
        fail(ErrKind::infinite_value, "nu_{1/2-gamma} <= 0: loss coefficient undefined");
    e.u0 = e.a0_tilde * sol.v0 / nu;
    return e;
}

double W_function(const NoTradeEllipsoid& e, const la::Vec& rho) {
    if (rho.size() != e.d()) fail(ErrKind::dimension, "rho dimension mismatch");
    const double q = la::dot(rho, la::matvec(e.M, rho));
    if (q < 1.0) {
        const double g = q - 1.0;
        return 1.0 - g * g;
    }
    return 1.0;
}

la::Mat W_hessian(const NoTradeEllipsoid& e, const la::Vec& rho) {
    if (rho.size() != e.d()) fail(ErrKind::dimension, "rho dimension mismatch");
    const la::Vec mr = la::matvec(e.M, rho);
    const double q = la::dot(rho, mr);
    if (!(q < 1.0)) fail(ErrKind::bad_input, "Hessian requested outside the ellipsoid interior");
    return la::scale(e.M, -4.0 * (q - 1.0)) - la::scale(la::outer(mr, mr), 8.0);
}

std::vector<la::Vec> boundary_points(const NoTradeEllipsoid& e, double z, double lambda, int n) {
    if (n < 3) fail(ErrKind::bad_input, "need at least 3 boundary points");
    if (!(z > 0.0)) fail(ErrKind::bad_input, "wealth z must be positive");
    if (!(lambda > 0.0)) fail(ErrKind::bad_input, "fixed cost lambda must be positive");
    const std::size_t d = e.d();
    const double scale = std::pow(lambda / z, 0.25);

    std::vector<la::Vec> pts;
    if (d == 2) {
        pts.reserve(std::size_t(n));
        constexpr double two_pi = 6.283185307179586476925286766559;
        for (int k = 0; k < n; ++k) {
            const double phi = two_pi * double(k) / double(n);
            la::Vec u{std::cos(phi), std::sin(phi)};
            const double r = 1.0 / std::sqrt(la::dot(u, la::matvec(e.M, u)));
            la::Vec p(2);
            for (std::size_t i = 0; i < 2; ++i) p[i] = e.pi_m[i] + scale * r * u[i];
            pts.push_back(std::move(p));
        }
        return pts;
    }
    // General d: extreme points along the eigen-directions of M, +/- v_i / sqrt(m_i).
    const la::EigenSym es = la::jacobi_eigensym(e.M);
    pts.reserve(2 * d);
    for (std::size_t j = 0; j < d; ++j) {
        const double r = 1.0 / std::sqrt(es.values[j]);
        for (const double sgn : {+1.0, -1.0}) {
            la::Vec p(d);
            for (std::size_t i = 0; i < d; ++i)
                p[i] = e.pi_m[i] + sgn * scale * r * es.vectors(i, j);
            pts.push_back(std::move(p));
        }
    }
    return pts;
}

} // namespace ntzone

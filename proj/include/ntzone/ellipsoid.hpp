#pragma once

#include "ntzone/model.hpp"

#include <utility>
#include <vector>

namespace ntzone {

// Shape of the multi-asset no-trade region. In rescaled deviation coordinates
// rho, the region is the ellipsoid J = { rho : rho^T M rho <= 1 }; in weight
// space at wealth z and fixed cost lambda it is
// pi_m + (lambda/z)^{1/4} J. M solves 4 M Tr[A M] + 8 M A M = gamma Sigma.
struct NoTradeEllipsoid {
    la::Mat M;
    la::Mat A;       // rescaled weight-deviation covariance (I-pi 1^T)diag(pi) Sigma diag(pi)(I-pi 1^T)^T
    la::Vec pi_m;
    double a0_tilde = 0.0; // 2 Tr[A M]: ergodic cost coefficient per unit v_z
    double u0 = 0.0;       // a0_tilde v0 / nu_{1/2-gamma}: welfare loss coefficient
    double residual = 0.0; // relative Frobenius residual of the matrix equation

    std::size_t d() const { return pi_m.size(); }
};

// (A, Sigma) entering the matrix equation. A = alpha alpha^T with the z-free
// alpha from the frictionless solution. Throws DegenerateRegion when A is not
// numerically positive definite (lambda_min <= 1e-14 lambda_max).
std::pair<la::Mat, la::Mat> rescaled_matrices(const MertonSolution& sol,
                                              const MarketParams& market);

// Solves 4 M Tr[A M] + 8 M A M = gamma Sigma for symmetric positive definite
// M by reduction to a shared eigenbasis and a scalar fixed point in t = Tr[M~]
// (bisection, absolute tolerance 1e-14, at most 200 iterations). The result
// is verified; a relative residual above 1e-10 throws ResidualTooLarge.
la::Mat solve_riccati(const la::Mat& A, const la::Mat& Sigma, double gamma);

// Relative Frobenius residual ||4 M Tr[AM] + 8 MAM - gamma Sigma||_F /
// ||gamma Sigma||_F.
double riccati_residual(const la::Mat& M, const la::Mat& A, const la::Mat& Sigma, double gamma);

// Full solution bundle for a market. Throws InfiniteValue when
// nu_{1/2-gamma} <= 0 (loss coefficient undefined).
NoTradeEllipsoid ellipsoid_solution(const MertonSolution& sol, const Preferences& prefs,
                                    const MarketParams& market);

// Rescaled corrector profile: 1 - (rho^T M rho - 1)^2 inside J, 1 outside.
double W_function(const NoTradeEllipsoid& e, const la::Vec& rho);

// Analytic Hessian of W at an interior point:
// -4 (rho^T M rho - 1) M - 8 (M rho)(M rho)^T. Throws BadInput outside J.
la::Mat W_hessian(const NoTradeEllipsoid& e, const la::Vec& rho);

// Points on the weight-space boundary pi_m + (lambda/z)^{1/4} dJ. For d == 2,
// n points at equally spaced angles; for other d, the 2d extreme points along
// the eigen-directions of M (n is validated but does not change the count).
std::vector<la::Vec> boundary_points(const NoTradeEllipsoid& e, double z, double lambda, int n);

} // namespace ntzone

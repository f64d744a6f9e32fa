#pragma once

#include "ntzone/linalg.hpp"

#include <cstddef>

namespace ntzone {

// Market with one safe asset (rate r) and d risky assets with drift mu and
// volatility matrix sigma (d x d); instantaneous covariance is sigma*sigma^T.
struct MarketParams {
    double r = 0.0;
    la::Vec mu;   // d
    la::Mat sigma; // d x d

    std::size_t d() const { return mu.size(); }
};

// CRRA investor: relative risk aversion gamma, impatience beta. gamma == 1 is
// log utility and gets its own code path wherever the formulas have a pole.
struct Preferences {
    double gamma = 0.0;
    double beta = 0.0;
};

// Frictionless optimum: constant risky weights pi_m, consumption rate c_m per
// unit wealth, value coefficient v0 = c_m^{-gamma} (v_z(z) = v0 z^{-gamma}
// for every gamma, including 1), and the weight-deviation volatility loading
// alpha = (I - pi_m 1^T) diag(pi_m) sigma whose invertibility keeps the
// no-trade region non-degenerate.
struct MertonSolution {
    la::Vec pi_m;
    double c_m = 0.0;
    double v0 = 0.0;
    la::Mat alpha;
    bool is_log = false;

    std::size_t d() const { return pi_m.size(); }
};

// Validates inputs (r > 0, mu^i - r > 0, sigma*sigma^T positive definite,
// gamma > 0, beta > 0) and assembles the frictionless solution.
// Throws InfiniteValue when c_m <= 0, DegenerateRegion when alpha is
// numerically singular (smallest singular value < 1e-12 x largest).
MertonSolution merton_solution(const MarketParams& market, const Preferences& prefs);

// Consumption propensity c_m as a function of risk aversion, holding the
// market and impatience fixed: c_m(g) = beta/g + (1 - 1/g)(r + q/(2g)) with
// q the squared Sharpe aggregate (mu - r1)^T (sigma sigma^T)^{-1} (mu - r1).
// c_m(1) = beta exactly.
double consumption_rate(const MarketParams& market, double beta, double g);

// q = (mu - r1)^T (sigma sigma^T)^{-1} (mu - r1).
double sharpe_square(const MarketParams& market);

// Frictionless value at wealth z: z^{1-gamma}/(1-gamma) c_m^{-gamma}, or for
// log utility log(beta z)/beta + (r + q/2 - beta)/beta^2. Throws BadInput for
// z <= 0.
double frictionless_value(const MertonSolution& sol, const Preferences& prefs,
                          const MarketParams& market, double z);

// Eigenvalue nu_p of the frictionless HJB operator on the power z^p:
// nu_p = beta - p r - p pi_m.(mu - r1) - p(p-1)/2 |sigma^T pi_m|^2 + p c_m.
// Satisfies nu_{1/2-gamma} = c_m(2 gamma).
double nu_exponent(const MertonSolution& sol, const Preferences& prefs,
                   const MarketParams& market, double p);

// CRRA utility of a consumption rate: c^{1-gamma}/(1-gamma), log c at gamma=1.
double crra_utility(double gamma, double c);

} // namespace ntzone

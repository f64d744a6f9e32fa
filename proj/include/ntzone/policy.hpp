#pragma once

#include "ntzone/ellipsoid.hpp"
#include "ntzone/model.hpp"

#include <utility>

namespace ntzone {

// Holdings in currency: x in the safe asset, y[i] in risky asset i.
struct PortfolioState {
    double x = 0.0;
    la::Vec y;

    double wealth() const {
        double z = x;
        for (double v : y) z += v;
        return z;
    }
};

// True iff the state lies strictly inside the no-trade region:
// (y/z - pi_m)^T M (y/z - pi_m) < sqrt(lambda/z). Boundary states count as
// outside (a trade fires there). Throws BadInput for z <= 0 or lambda < 0.
bool nt_contains(const PortfolioState& state, const NoTradeEllipsoid& e, double lambda);

// Single-asset no-trade interval in weight space:
// pi_m -/+ (12/gamma pi^2(1-pi)^2 lambda/z)^{1/4}. lambda = 0 collapses the
// interval to {pi_m}. Throws DimensionError unless d == 1.
std::pair<double, double> trading_boundaries_1d(const MertonSolution& sol,
                                                const Preferences& prefs, double z,
                                                double lambda);

// Proportional cost with the same leading welfare loss:
// (1024 gamma / (3 pi^2 (1-pi)^2))^{1/4} (lambda/z)^{3/4}. Throws
// DegenerateRegion at pi_m in {0, 1}, DimensionError unless d == 1.
double equivalent_proportional_cost(const MertonSolution& sol, const Preferences& prefs,
                                    double z, double lambda);

// Leading certainty-equivalent loss as a fraction of wealth:
// u0 c_m^gamma sqrt(lambda/z). Any dimension (u0 from the ellipsoid solution).
double certainty_equivalent_loss(const MertonSolution& sol, const Preferences& prefs,
                                 const NoTradeEllipsoid& e, double z, double lambda);

// Post-trade state at the Merton point: z' = z - lambda, y' = pi_m z',
// x' = z'(1 - pi_m.1). Throws Insolvent when z <= lambda.
PortfolioState rebalance_target(const PortfolioState& state, const MertonSolution& sol,
                                double lambda);

} // namespace ntzone

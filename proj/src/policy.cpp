#include "ntzone/policy.hpp"

#include "ntzone/errors.hpp"

#include <cmath>

namespace ntzone {

bool nt_contains(const PortfolioState& state, const NoTradeEllipsoid& e, double lambda) {
    if (state.y.size() != e.d()) fail(ErrKind::dimension, "state dimension mismatch");
    if (lambda < 0.0) fail(ErrKind::bad_input, "fixed cost lambda must be nonnegative");
    const double z = state.wealth();
    if (!(z > 0.0)) fail(ErrKind::bad_input, "wealth must be positive");
    la::Vec dev(e.d());
    for (std::size_t i = 0; i < e.d(); ++i) dev[i] = state.y[i] / z - e.pi_m[i];
    const double q = la::dot(dev, la::matvec(e.M, dev));
    return q < std::sqrt(lambda / z);
}

static double halfwidth_1d(double gamma, double pi, double z, double lambda) {
    return std::pow(12.0 / gamma * pi * pi * (1.0 - pi) * (1.0 - pi) * lambda / z, 0.25);
}

std::pair<double, double> trading_boundaries_1d(const MertonSolution& sol,
                                                const Preferences& prefs, double z,
                                                double lambda) {
    if (sol.d() != 1) fail(ErrKind::dimension, "trading_boundaries_1d requires d == 1");
    if (!(z > 0.0)) fail(ErrKind::bad_input, "wealth z must be positive");
    if (lambda < 0.0) fail(ErrKind::bad_input, "fixed cost lambda must be nonnegative");
    const double pi = sol.pi_m[0];
    const double h = halfwidth_1d(prefs.gamma, pi, z, lambda);
    return {pi - h, pi + h};
}

double equivalent_proportional_cost(const MertonSolution& sol, const Preferences& prefs,
                                    double z, double lambda) {
    if (sol.d() != 1) fail(ErrKind::dimension, "equivalent_proportional_cost requires d == 1");
    if (!(z > 0.0)) fail(ErrKind::bad_input, "wealth z must be positive");
    if (lambda < 0.0) fail(ErrKind::bad_input, "fixed cost lambda must be nonnegative");
    const double pi = sol.pi_m[0];
    const double pp = pi * pi * (1.0 - pi) * (1.0 - pi);
    if (pp == 0.0)
        fail(ErrKind::degenerate_region, "pi_m in {0,1}: no proportional-cost equivalent");
    return std::pow(1024.0 * prefs.gamma / (3.0 * pp), 0.25) * std::pow(lambda / z, 0.75);
}

double certainty_equivalent_loss(const MertonSolution& sol, const Preferences& prefs,
                                 const NoTradeEllipsoid& e, double z, double lambda) {
    if (!(z > 0.0)) fail(ErrKind::bad_input, "wealth z must be positive");
    if (lambda < 0.0) fail(ErrKind::bad_input, "fixed cost lambda must be nonnegative");
    return e.u0 * std::pow(sol.c_m, prefs.gamma) * std::sqrt(lambda / z);
}

PortfolioState rebalance_target(const PortfolioState& state, const MertonSolution& sol,
                                double lambda) {
    if (state.y.size() != sol.d()) fail(ErrKind::dimension, "state dimension mismatch");
    if (lambda < 0.0) fail(ErrKind::bad_input, "fixed cost lambda must be nonnegative");
    const double z_after = state.wealth() - lambda;
    if (!(z_after > 0.0)) fail(ErrKind::insolvent, "wealth cannot cover the fixed cost");
    PortfolioState out;
    out.y.resize(sol.d());
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < sol.d(); ++i) {
        out.y[i] = sol.pi_m[i] * z_after;
        weight_sum += sol.pi_m[i];
    }
    out.x = z_after * (1.0 - weight_sum);
    return out;
}

} // namespace ntzone

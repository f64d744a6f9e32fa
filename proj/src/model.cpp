#include "ntzone/model.hpp"

#include "ntzone/errors.hpp"

#include <cmath>
#include <string>

namespace ntzone {

static void validate_market(const MarketParams& market) {
    const std::size_t d = market.d();
    if (d == 0) fail(ErrKind::bad_input, "need at least one risky asset");
    if (market.sigma.n != d) fail(ErrKind::dimension, "sigma must be d x d with d = len(mu)");
    if (!(market.r > 0.0)) fail(ErrKind::bad_input, "safe rate r must be positive");
    for (std::size_t i = 0; i < d; ++i)
        if (!(market.mu[i] > market.r))
            fail(ErrKind::bad_input, "excess return mu[" + std::to_string(i) + "] - r must be positive");
}

static void validate_prefs(const Preferences& prefs) {
    if (!(prefs.gamma > 0.0)) fail(ErrKind::bad_input, "risk aversion gamma must be positive");
    if (!(prefs.beta > 0.0)) fail(ErrKind::bad_input, "impatience beta must be positive");
}

static la::Mat covariance(const MarketParams& market) {
    return market.sigma * la::transpose(market.sigma);
}

double sharpe_square(const MarketParams& market) {
    validate_market(market);
    la::Vec excess(market.d());
    for (std::size_t i = 0; i < market.d(); ++i) excess[i] = market.mu[i] - market.r;
    // solve_spd rejects a singular covariance via its Cholesky.
    const la::Vec w = la::solve_spd(covariance(market), excess);
    return la::dot(excess, w);
}

double consumption_rate(const MarketParams& market, double beta, double g) {
    if (!(g > 0.0)) fail(ErrKind::bad_input, "risk aversion must be positive");
    const double q = sharpe_square(market);
    return beta / g + (1.0 - 1.0 / g) * (market.r + q / (2.0 * g));
}

MertonSolution merton_solution(const MarketParams& market, const Preferences& prefs) {
    validate_market(market);
    validate_prefs(prefs);
    const std::size_t d = market.d();

    la::Vec excess(d);
    for (std::size_t i = 0; i < d; ++i) excess[i] = market.mu[i] - market.r;

    MertonSolution sol;
    sol.pi_m = la::solve_spd(covariance(market), excess);
    for (double& w : sol.pi_m) w /= prefs.gamma;
    sol.is_log = prefs.gamma == 1.0;

    sol.c_m = consumption_rate(market, prefs.beta, prefs.gamma);
    if (!(sol.c_m > 0.0))
        fail(ErrKind::infinite_value, "consumption propensity c_m <= 0: value function is infinite");
    sol.v0 = std::pow(sol.c_m, -prefs.gamma);

    // alpha = (I - pi 1^T) diag(pi) sigma, the volatility of the risky-weight
    // deviation. Rows: alpha_ij = pi_i sigma_ij - pi_i sum_k pi_k sigma_kj.
    la::Mat alpha(d);
    for (std::size_t j = 0; j < d; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < d; ++k) acc += sol.pi_m[k] * market.sigma(k, j);
        for (std::size_t i = 0; i < d; ++i)
            alpha(i, j) = sol.pi_m[i] * (market.sigma(i, j) - acc);
    }
    sol.alpha = alpha;

    // The singular-value ratio misses uniform cancellation (a fully invested
    // market leaves every entry of alpha at rounding noise), so also compare
    // against the unprojected loadings diag(pi) sigma.
    const la::Vec sv = la::singular_values(alpha);
    double asq = 0.0, dsq = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            asq += alpha(i, j) * alpha(i, j);
            const double dij = sol.pi_m[i] * market.sigma(i, j);
            dsq += dij * dij;
        }
    if (!(sv.front() > 1e-12 * sv.back()) || !(asq > 1e-16 * dsq))
        fail(ErrKind::degenerate_region,
             "alpha = (I - pi 1^T) diag(pi) sigma is singular: no-trade region degenerates");
    return sol;
}

double frictionless_value(const MertonSolution& sol, const Preferences& prefs,
                          const MarketParams& market, double z) {
    if (!(z > 0.0)) fail(ErrKind::bad_input, "wealth z must be positive");
    if (sol.is_log) {
        const double q = sharpe_square(market);
        return std::log(prefs.beta * z) / prefs.beta +
               (market.r + q / 2.0 - prefs.beta) / (prefs.beta * prefs.beta);
    }
    return std::pow(z, 1.0 - prefs.gamma) / (1.0 - prefs.gamma) * sol.v0;
}

double nu_exponent(const MertonSolution& sol, const Preferences& prefs,
                   const MarketParams& market, double p) {
    la::Vec excess(market.d());
    for (std::size_t i = 0; i < market.d(); ++i) excess[i] = market.mu[i] - market.r;
    const la::Vec sig_pi = la::matvec(la::transpose(market.sigma), sol.pi_m);
    const double var_m = la::dot(sig_pi, sig_pi);
    return prefs.beta - p * market.r - p * la::dot(sol.pi_m, excess) -
           0.5 * p * (p - 1.0) * var_m + p * sol.c_m;
}

double crra_utility(double gamma, double c) {
    if (!(c > 0.0)) fail(ErrKind::bad_input, "consumption must be positive");
    if (gamma == 1.0) return std::log(c);
    return std::pow(c, 1.0 - gamma) / (1.0 - gamma);
}

} // namespace ntzone

#pragma once

#include "ntzone/ellipsoid.hpp"
#include "ntzone/model.hpp"

#include <cstdint>
#include <vector>

namespace ntzone {

// What to credit at the horizon: the frictionless value of terminal wealth
// (default; nearly unbiased), or nothing (lower bound on the achieved value).
enum class TailMode { frictionless_value, zero };

struct SimConfig {
    MarketParams market;
    Preferences prefs;
    double lambda = 0.0;
    double z0 = 1.0;
    la::Vec initial_weights; // empty: start at pi_m
    double dt = 0.0;         // <= 0: min(1/2520, tau_bar/50), tau_bar the mean time between trades
    double horizon = 0.0;    // <= 0: smallest T with exp(-beta T) <= 1e-4
    std::int64_t n_paths = 1;
    std::uint64_t seed = 1;
    double eta = 2.0;        // liquidate when Z <= eta lambda; must stay >= 2
    TailMode tail_mode = TailMode::frictionless_value;
};

struct SimOptions {
    // Scales the no-trade region half-width constant: k = c 12/gamma, i.e.
    // the half-width scales as c^{1/4} and the ellipsoid matrix becomes
    // M / sqrt(c). 1.0 is the asymptotically optimal region.
    double width_multiplier = 1.0;
    // 0: NTZONE_THREADS env var, else hardware concurrency. Results are
    // identical for every thread count.
    int threads = 0;
};

struct PathStats {
    double utility = 0.0;   // J: discounted utility of the simulated policy
    double control = 0.0;   // J*: frictionless twin on the same noise, E[J*] = v(z0)
    std::int64_t n_trades = 0;
    bool liquidated = false;
    double z_final = 0.0;
};

struct SimResult {
    double j_hat = 0.0;        // control-variate estimate of E[J]
    double std_error = 0.0;    // standard error of j_hat (and of welfare_loss)
    double welfare_loss = 0.0; // v(z0) - j_hat = mean(J* - J)
    double trades_per_year = 0.0;
    double liquidation_fraction = 0.0;
    std::int64_t n_paths_effective = 0;
    double raw_j_mean = 0.0;     // plain mean of J, for diagnostics
    double control_mean = 0.0;   // plain mean of J*, approaches v(z0)
    double v_frictionless = 0.0; // v(z0)
    double dt_used = 0.0;
    double horizon_used = 0.0;
};

// Value of liquidating to the safe asset and consuming c_t = (r/2) x e^{rt/2}
// forever: U((r/2) x_after) / (beta - (1-gamma) r/2), or for log utility
// log((r/2) x_after)/beta + r/(2 beta^2). Throws BadInput for x_after <= 0,
// InfiniteValue when the discount denominator is not positive.
double liquidation_tail_utility(const Preferences& prefs, const MarketParams& market,
                                double x_after);

// One path, fully determined by (cfg.seed, path_index). Grid policy: at each
// grid time first liquidate if Z <= eta lambda (pay lambda, move to the safe
// asset, credit the deterministic tail), else rebalance to pi_m if the state
// left the open no-trade region; then accrue exp(-beta t) U(c_m Z) dt
// (left endpoint) and advance: exact lognormal step for each risky position,
// Euler for the safe one. The frictionless twin Z* accrues in lockstep on the
// same Gaussians and always ends with its exact tail exp(-beta T) v(Z*_T).
PathStats simulate_path(const SimConfig& cfg, std::uint64_t path_index,
                        const SimOptions& opts = {});

// Step-by-step record for verification: state on arrival at the grid point,
// action taken, post-action state, and the Gaussians used to leave it.
struct PathStep {
    double t = 0.0;
    double x_arrival = 0.0;
    la::Vec y_arrival;
    bool traded = false;
    bool liquidated = false;
    double x_post = 0.0;
    la::Vec y_post;
    la::Vec normals; // draws used to evolve from this grid point (empty on the last entry)
};

PathStats simulate_path_traced(const SimConfig& cfg, std::uint64_t path_index,
                               std::vector<PathStep>& trace, const SimOptions& opts = {});

struct DetailedResult {
    SimResult summary;
    std::vector<double> path_utility; // J per path
    std::vector<double> path_control; // J* per path
};

// Parallel map of simulate_path over 0..n_paths-1; per-path substreams make
// the result independent of the thread count, and pairwise summation makes
// the reductions deterministic.
SimResult estimate_welfare(const SimConfig& cfg, const SimOptions& opts = {});
DetailedResult estimate_welfare_detailed(const SimConfig& cfg, const SimOptions& opts = {});

struct ScalingPoint {
    double lambda = 0.0;
    SimResult result;
};

struct ScalingStudy {
    std::vector<ScalingPoint> points;
    double loss_slope = 0.0;   // d log(loss) / d log(lambda), OLS
    double trades_slope = 0.0; // d log(trades/yr) / d log(lambda), OLS
};

// Same seed for every lambda (common random numbers). Requires >= 3 lambdas
// spanning >= 1.5 decades, all positive.
ScalingStudy scaling_study(const SimConfig& base, const std::vector<double>& lambdas,
                           const SimOptions& opts = {});

struct SweepPoint {
    double multiplier = 0.0;
    SimResult result;
    double loss_minus_base = 0.0; // loss(c) - loss(1), paired by path
    double diff_std_error = 0.0;  // standard error of that paired difference
};

struct WidthSweep {
    std::vector<SweepPoint> points;
};

// Welfare across no-trade region widths, common random numbers, paired
// differences against the c = 1 baseline (run implicitly if not listed).
WidthSweep width_sweep(const SimConfig& base, const std::vector<double>& multipliers,
                       const SimOptions& opts = {});

// Resolved defaults, exposed for manifests and tests.
double default_dt(const SimConfig& cfg);
double default_horizon(const SimConfig& cfg, double dt);

} // namespace ntzone

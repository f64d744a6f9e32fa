#include "ntzone/simulate.hpp"

#include "ntzone/errors.hpp"
#include "ntzone/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>
#include <utility>

namespace ntzone {

namespace {

// CRRA utility with branch-free-ish fast paths for the hot loop. The generic
// pow route is only taken for gammas outside {1, 2}.
struct Util {
    double gamma = 0.0;
    double inv_1mg = 0.0;
    int mode = 2; // 0: log, 1: gamma == 2, 2: generic

    explicit Util(double g) : gamma(g) {
        if (g == 1.0) mode = 0;
        else if (g == 2.0) mode = 1;
        else { mode = 2; inv_1mg = 1.0 / (1.0 - g); }
    }
    double operator()(double c) const {
        if (mode == 1) return -1.0 / c;
        if (mode == 0) return std::log(c);
        return std::pow(c, 1.0 - gamma) * inv_1mg;
    }
};

// Everything precomputed once per estimate_welfare call; shared read-only by
// the worker threads.
struct Engine {
    MarketParams market;
    Preferences prefs;
    std::size_t d = 0;
    std::int64_t n_steps = 0;
    double dt = 0.0, horizon = 0.0;
    double r = 0.0, cm = 0.0, lambda = 0.0, eta_lambda = 0.0, z0 = 0.0, x0 = 0.0;
    la::Vec y0, pi, drift, psig; // drift: (mu_i - Sigma_ii/2) dt; psig: (sigma^T pi)_j sqrt(dt)
    la::Mat sdt;                 // sigma sqrt(dt)
    la::Mat M;                   // ellipsoid matrix over the width multiplier
    double pi_sum = 0.0;
    double gstar_dt = 0.0; // frictionless log-drift per step
    double decay = 0.0;    // exp(-beta dt)
    Util util{2.0};
    TailMode tail = TailMode::frictionless_value;
    std::uint64_t seed = 0;
    // frictionless value pieces
    double gamma = 0.0, beta = 0.0, v0 = 0.0, q_sharpe = 0.0;
    bool is_log = false;

    double v_of(double z) const {
        if (is_log)
            return std::log(beta * z) / beta + (r + q_sharpe / 2.0 - beta) / (beta * beta);
        return std::pow(z, 1.0 - gamma) / (1.0 - gamma) * v0;
    }
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("NTZONE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

// Order-fixed pairwise summation: deterministic and accurate for the path
// reductions regardless of thread count.
double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0; // sample standard deviation
};

MeanSd mean_sd(const std::vector<double>& v) {
    MeanSd out;
    const std::size_t n = v.size();
    out.mean = pairwise_sum(v.data(), n) / double(n);
    if (n < 2) return out;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dvi = v[i] - out.mean;
        sq[i] = dvi * dvi;
    }
    out.sd = std::sqrt(pairwise_sum(sq.data(), n) / double(n - 1));
    return out;
}

Engine make_engine(const SimConfig& cfg, const SimOptions& opts) {
    if (cfg.n_paths < 1) fail(ErrKind::bad_input, "n_paths must be at least 1");
    if (!(cfg.z0 > 0.0)) fail(ErrKind::bad_input, "initial wealth z0 must be positive");
    if (cfg.lambda < 0.0) fail(ErrKind::bad_input, "fixed cost lambda must be nonnegative");
    if (!(cfg.eta >= 2.0)) fail(ErrKind::bad_input, "liquidation multiplier eta must be >= 2");
    if (!(opts.width_multiplier > 0.0))
        fail(ErrKind::bad_input, "width multiplier must be positive");

    const MertonSolution sol = merton_solution(cfg.market, cfg.prefs);
    const NoTradeEllipsoid ell = ellipsoid_solution(sol, cfg.prefs, cfg.market);

    Engine e;
    e.market = cfg.market;
    e.prefs = cfg.prefs;
    e.d = sol.d();
    e.r = cfg.market.r;
    e.cm = sol.c_m;
    e.lambda = cfg.lambda;
    e.eta_lambda = cfg.eta * cfg.lambda;
    e.z0 = cfg.z0;
    e.pi = sol.pi_m;
    e.seed = cfg.seed;
    e.tail = cfg.tail_mode;
    e.gamma = cfg.prefs.gamma;
    e.beta = cfg.prefs.beta;
    e.v0 = sol.v0;
    e.is_log = sol.is_log;
    e.q_sharpe = sharpe_square(cfg.market);
    e.util = Util(cfg.prefs.gamma);
    // Multiplier c scales the squared-half-width constant (k = c 12/gamma, so
    // the half-width itself grows as c^{1/4}): divide the form by sqrt(c).
    e.M = la::scale(ell.M, 1.0 / std::sqrt(opts.width_multiplier));

    e.dt = cfg.dt > 0.0 ? cfg.dt : default_dt(cfg);
    const double t_target = cfg.horizon > 0.0 ? cfg.horizon : std::log(1e4) / cfg.prefs.beta;
    e.n_steps = std::max<std::int64_t>(1, std::int64_t(std::ceil(t_target / e.dt - 1e-9)));
    e.horizon = double(e.n_steps) * e.dt;
    e.decay = std::exp(-cfg.prefs.beta * e.dt);

    // Starting holdings.
    la::Vec w0 = cfg.initial_weights;
    if (w0.empty()) w0 = sol.pi_m;
    if (w0.size() != e.d) fail(ErrKind::dimension, "initial_weights must have one entry per asset");
    e.y0.resize(e.d);
    double wsum = 0.0;
    for (std::size_t i = 0; i < e.d; ++i) {
        e.y0[i] = w0[i] * cfg.z0;
        wsum += w0[i];
    }
    e.x0 = cfg.z0 * (1.0 - wsum);
    for (double p : sol.pi_m) e.pi_sum += p;

    // Per-step constants. Sigma = sigma sigma^T.
    const la::Mat Sigma = cfg.market.sigma * la::transpose(cfg.market.sigma);
    const double sq_dt = std::sqrt(e.dt);
    e.drift.resize(e.d);
    for (std::size_t i = 0; i < e.d; ++i)
        e.drift[i] = (cfg.market.mu[i] - 0.5 * Sigma(i, i)) * e.dt;
    e.sdt = la::scale(cfg.market.sigma, sq_dt);
    const la::Vec sig_pi = la::matvec(la::transpose(cfg.market.sigma), sol.pi_m);
    e.psig.resize(e.d);
    for (std::size_t j = 0; j < e.d; ++j) e.psig[j] = sig_pi[j] * sq_dt;
    double excess = 0.0;
    for (std::size_t i = 0; i < e.d; ++i) excess += sol.pi_m[i] * (cfg.market.mu[i] - cfg.market.r);
    const double var_m = la::dot(sig_pi, sig_pi);
    e.gstar_dt = (cfg.market.r + excess - sol.c_m - 0.5 * var_m) * e.dt;
    return e;
}

PathStats run_path(const Engine& e, std::uint64_t idx, std::vector<PathStep>* trace) {
    rng::Stream gen(e.seed, idx);
    const std::size_t d = e.d;
    la::Vec y = e.y0;
    la::Vec dev(d), nrm(d);
    double x = e.x0;
    double zstar = e.z0;
    double disc = 1.0;
    double utility = 0.0, control = 0.0;
    PathStats st;

    for (std::int64_t k = 0; k < e.n_steps; ++k) {
        // Frictionless twin accrues on the same grid (left endpoint).
        control += disc * e.util(e.cm * zstar) * e.dt;

        if (!st.liquidated) {
            double z = x;
            for (std::size_t i = 0; i < d; ++i) z += y[i];

            PathStep* step = nullptr;
            if (trace) {
                trace->push_back(PathStep{});
                step = &trace->back();
                step->t = double(k) * e.dt;
                step->x_arrival = x;
                step->y_arrival = y;
            }

            if (z <= e.eta_lambda) {
                // Liquidate: everything to the safe asset, pay the cost, and
                // credit the deterministic consume-forever tail.
                const double x_after = z - e.lambda;
                if (!(x_after > 0.0))
                    fail(ErrKind::insolvent, "wealth cannot cover the fixed cost at liquidation");
                utility += disc * liquidation_tail_utility(e.prefs, e.market, x_after);
                st.liquidated = true;
                st.z_final = x_after;
                x = x_after;
                std::fill(y.begin(), y.end(), 0.0);
                if (step) {
                    step->liquidated = true;
                    step->x_post = x;
                    step->y_post = y;
                }
            } else {
                // Trade iff the state is not strictly inside the region
                // (same comparison as nt_contains, including FP order).
                double q = 0.0;
                for (std::size_t i = 0; i < d; ++i) dev[i] = y[i] / z - e.pi[i];
                for (std::size_t i = 0; i < d; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < d; ++j) acc += e.M(i, j) * dev[j];
                    q += dev[i] * acc;
                }
                if (!(q < std::sqrt(e.lambda / z))) {
                    const double z_after = z - e.lambda;
                    if (!(z_after > 0.0))
                        fail(ErrKind::insolvent, "wealth cannot cover the fixed cost at rebalance");
                    for (std::size_t i = 0; i < d; ++i) y[i] = e.pi[i] * z_after;
                    x = z_after * (1.0 - e.pi_sum);
                    z = z_after;
                    ++st.n_trades;
                    if (step) step->traded = true;
                }
                utility += disc * e.util(e.cm * z) * e.dt;
                if (step) {
                    step->x_post = x;
                    step->y_post = y;
                }

                // Evolve: exact lognormal per risky position, Euler for safe.
                for (std::size_t j = 0; j < d; ++j) nrm[j] = gen.next_normal();
                if (step) step->normals = nrm;
                for (std::size_t i = 0; i < d; ++i) {
                    double l = e.drift[i];
                    for (std::size_t j = 0; j < d; ++j) l += e.sdt(i, j) * nrm[j];
                    y[i] *= std::exp(l);
                }
                x += (e.r * x - e.cm * z) * e.dt;
                double ls = e.gstar_dt;
                for (std::size_t j = 0; j < d; ++j) ls += e.psig[j] * nrm[j];
                zstar *= std::exp(ls);
                disc *= e.decay;
                continue;
            }
        }

        // Liquidated path: only the frictionless twin keeps moving.
        double ls = e.gstar_dt;
        for (std::size_t j = 0; j < d; ++j) ls += e.psig[j] * gen.next_normal();
        zstar *= std::exp(ls);
        disc *= e.decay;
    }

    if (!st.liquidated) {
        double z_final = x;
        for (std::size_t i = 0; i < d; ++i) z_final += y[i];
        st.z_final = z_final;
        if (e.tail == TailMode::frictionless_value) utility += disc * e.v_of(z_final);
        if (trace) {
            trace->push_back(PathStep{});
            PathStep& last = trace->back();
            last.t = double(e.n_steps) * e.dt;
            last.x_arrival = x;
            last.y_arrival = y;
            last.x_post = x;
            last.y_post = y;
        }
    }
    // The twin always closes with its exact continuation value, so that
    // E[control] = v(z0) up to quadrature error.
    control += disc * e.v_of(zstar);

    st.utility = utility;
    st.control = control;
    return st;
}

void run_all(const Engine& e, std::int64_t n_paths, int threads, std::vector<double>& utility,
             std::vector<double>& control, std::vector<std::int64_t>& trades,
             std::vector<char>& liq) {
    utility.assign(std::size_t(n_paths), 0.0);
    control.assign(std::size_t(n_paths), 0.0);
    trades.assign(std::size_t(n_paths), 0);
    liq.assign(std::size_t(n_paths), 0);

    const auto worker = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) {
            const PathStats st = run_path(e, std::uint64_t(p), nullptr);
            utility[std::size_t(p)] = st.utility;
            control[std::size_t(p)] = st.control;
            trades[std::size_t(p)] = st.n_trades;
            liq[std::size_t(p)] = st.liquidated ? 1 : 0;
        }
    };

    const int nthreads =
        int(std::max<std::int64_t>(1, std::min<std::int64_t>(resolve_threads(threads), n_paths)));
    if (nthreads == 1) {
        worker(0, n_paths);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
        const std::int64_t lo = n_paths * t / nthreads;
        const std::int64_t hi = n_paths * (t + 1) / nthreads;
        pool.emplace_back([&, lo, hi, t] {
            try {
                worker(lo, hi);
            } catch (...) {
                errors[std::size_t(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

} // namespace

double liquidation_tail_utility(const Preferences& prefs, const MarketParams& market,
                                double x_after) {
    if (!(x_after > 0.0)) fail(ErrKind::bad_input, "post-liquidation wealth must be positive");
    if (!(market.r > 0.0)) fail(ErrKind::bad_input, "safe rate r must be positive");
    const double c0 = market.r / 2.0 * x_after;
    if (prefs.gamma == 1.0)
        return std::log(c0) / prefs.beta + market.r / (2.0 * prefs.beta * prefs.beta);
    const double denom = prefs.beta - (1.0 - prefs.gamma) * market.r / 2.0;
    if (!(denom > 0.0))
        fail(ErrKind::infinite_value, "deterministic tail does not converge: beta <= (1-gamma) r/2");
    return crra_utility(prefs.gamma, c0) / denom;
}

double default_dt(const SimConfig& cfg) {
    constexpr double cap = 1.0 / 2520.0;
    if (cfg.lambda <= 0.0) return cap;
    const MertonSolution sol = merton_solution(cfg.market, cfg.prefs);
    const NoTradeEllipsoid ell = ellipsoid_solution(sol, cfg.prefs, cfg.market);
    const la::EigenSym em = la::jacobi_eigensym(ell.M);
    double tr_a = 0.0;
    for (std::size_t i = 0; i < ell.A.n; ++i) tr_a += ell.A(i, i);
    // Mean time between trades: narrowest squared half-width over the
    // deviation variance rate.
    const double tau_bar = std::sqrt(cfg.lambda / cfg.z0) / (em.values.back() * tr_a);
    return std::min(cap, tau_bar / 50.0);
}

double default_horizon(const SimConfig& cfg, double dt) {
    if (!(dt > 0.0)) fail(ErrKind::bad_input, "dt must be positive");
    const double t_raw = std::log(1e4) / cfg.prefs.beta;
    return std::ceil(t_raw / dt - 1e-9) * dt;
}

PathStats simulate_path(const SimConfig& cfg, std::uint64_t path_index, const SimOptions& opts) {
    const Engine e = make_engine(cfg, opts);
    return run_path(e, path_index, nullptr);
}

PathStats simulate_path_traced(const SimConfig& cfg, std::uint64_t path_index,
                               std::vector<PathStep>& trace, const SimOptions& opts) {
    const Engine e = make_engine(cfg, opts);
    trace.clear();
    return run_path(e, path_index, &trace);
}

DetailedResult estimate_welfare_detailed(const SimConfig& cfg, const SimOptions& opts) {
    const Engine e = make_engine(cfg, opts);
    DetailedResult out;
    std::vector<std::int64_t> trades;
    std::vector<char> liq;
    run_all(e, cfg.n_paths, opts.threads, out.path_utility, out.path_control, trades, liq);

    const std::size_t n = out.path_utility.size();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = out.path_control[i] - out.path_utility[i];
    const MeanSd loss = mean_sd(diff);

    SimResult& r = out.summary;
    const MertonSolution sol = merton_solution(cfg.market, cfg.prefs);
    r.v_frictionless = frictionless_value(sol, cfg.prefs, cfg.market, cfg.z0);
    r.welfare_loss = loss.mean;
    r.j_hat = r.v_frictionless - loss.mean;
    r.std_error = n > 1 ? loss.sd / std::sqrt(double(n)) : 0.0;
    r.raw_j_mean = pairwise_sum(out.path_utility.data(), n) / double(n);
    r.control_mean = pairwise_sum(out.path_control.data(), n) / double(n);
    std::int64_t total_trades = 0, total_liq = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total_trades += trades[i];
        total_liq += liq[i];
    }
    r.trades_per_year = double(total_trades) / (double(n) * e.horizon);
    r.liquidation_fraction = double(total_liq) / double(n);
    r.n_paths_effective = cfg.n_paths;
    r.dt_used = e.dt;
    r.horizon_used = e.horizon;
    return out;
}

SimResult estimate_welfare(const SimConfig& cfg, const SimOptions& opts) {
    return estimate_welfare_detailed(cfg, opts).summary;
}

namespace {

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= double(n);
    ybar /= double(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (xs[i] - xbar) * (ys[i] - ybar);
        den += (xs[i] - xbar) * (xs[i] - xbar);
    }
    return num / den;
}

} // namespace

ScalingStudy scaling_study(const SimConfig& base, const std::vector<double>& lambdas,
                           const SimOptions& opts) {
    if (lambdas.size() < 3) fail(ErrKind::bad_input, "scaling study needs at least 3 lambdas");
    double lo = lambdas.front(), hi = lambdas.front();
    for (double l : lambdas) {
        if (!(l > 0.0)) fail(ErrKind::bad_input, "scaling study lambdas must be positive");
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    if (!(std::log10(hi / lo) >= 1.5 - 1e-12))
        fail(ErrKind::bad_input, "scaling study lambdas must span at least 1.5 decades");

    ScalingStudy out;
    std::vector<double> lx, ly, lt;
    for (double l : lambdas) {
        SimConfig cfg = base;
        cfg.lambda = l;
        ScalingPoint pt;
        pt.lambda = l;
        pt.result = estimate_welfare(cfg, opts);
        lx.push_back(std::log(l));
        ly.push_back(std::log(pt.result.welfare_loss)); // NaN if loss <= 0: slope reflects it
        lt.push_back(std::log(pt.result.trades_per_year));
        out.points.push_back(std::move(pt));
    }
    out.loss_slope = ols_slope(lx, ly);
    out.trades_slope = ols_slope(lx, lt);
    return out;
}

WidthSweep width_sweep(const SimConfig& base, const std::vector<double>& multipliers,
                       const SimOptions& opts) {
    if (multipliers.empty()) fail(ErrKind::bad_input, "width sweep needs at least one multiplier");
    for (double c : multipliers)
        if (!(c > 0.0)) fail(ErrKind::bad_input, "width multipliers must be positive");

    // Each run reuses the same seed: paths are paired across multipliers.
    std::vector<DetailedResult> runs(multipliers.size());
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
        SimOptions o = opts;
        o.width_multiplier = multipliers[i];
        runs[i] = estimate_welfare_detailed(base, o);
    }

    const DetailedResult* baseline = nullptr;
    DetailedResult extra_baseline;
    for (std::size_t i = 0; i < multipliers.size(); ++i)
        if (multipliers[i] == 1.0) baseline = &runs[i];
    if (!baseline) {
        SimOptions o = opts;
        o.width_multiplier = 1.0;
        extra_baseline = estimate_welfare_detailed(base, o);
        baseline = &extra_baseline;
    }

    WidthSweep out;
    const std::size_t n = baseline->path_utility.size();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
        SweepPoint pt;
        pt.multiplier = multipliers[i];
        pt.result = runs[i].summary;
        // Paired loss difference: (J*-J)_c - (J*-J)_1 = J_1 - J_c path by path.
        for (std::size_t p = 0; p < n; ++p)
            diff[p] = baseline->path_utility[p] - runs[i].path_utility[p];
        const MeanSd ms = mean_sd(diff);
        pt.loss_minus_base = ms.mean;
        pt.diff_std_error = n > 1 ? ms.sd / std::sqrt(double(n)) : 0.0;
        out.points.push_back(std::move(pt));
    }
    return out;
}

} // namespace ntzone

// ntzone: command-line front end. Subcommands compute the frictionless
// baseline, no-trade region geometry, loss coefficients, and Monte Carlo
// welfare studies from a JSON market config. CSV goes to --out (or stdout);
// every file written is recorded in a JSON run manifest next to it.
//
// Exit codes: 0 success, 2 config/flag parse error, 3 input validation
// error, 4 numerical failure (no convergence, residual gate, insolvency).

#include "CLI11.hpp"
#include "json.hpp"

#include "ntzone/config.hpp"
#include "ntzone/corrector.hpp"
#include "ntzone/ellipsoid.hpp"
#include "ntzone/errors.hpp"
#include "ntzone/io.hpp"
#include "ntzone/model.hpp"
#include "ntzone/policy.hpp"
#include "ntzone/rng.hpp"
#include "ntzone/simulate.hpp"
#include "ntzone/version.hpp"

#include <clocale>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace ntzone;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrKind::parse, "cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrKind::bad_input, "cannot write file: " + path);
    out << content;
    if (!out) fail(ErrKind::bad_input, "failed writing file: " + path);
}

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        if (item.empty()) fail(ErrKind::parse, flag + ": empty entry in list");
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end != item.c_str() + item.size())
            fail(ErrKind::parse, flag + ": cannot parse number '" + item + "'");
        out.push_back(v);
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    if (out.empty()) fail(ErrKind::parse, flag + ": empty list");
    return out;
}

struct Shared {
    std::string config_path;
    std::string out_path;
    std::string manifest_path;
    int threads = 0;
};

void add_shared(CLI::App* cmd, Shared& sh, bool with_out = true) {
    cmd->add_option("-c,--config", sh.config_path, "JSON market config")->required();
    if (with_out) {
        cmd->add_option("-o,--out", sh.out_path, "CSV output path (default: stdout)");
        cmd->add_option("--manifest", sh.manifest_path,
                        "manifest path (default: <out>.manifest.json)");
    }
    cmd->add_option("--threads", sh.threads, "worker threads (0: NTZONE_THREADS or hardware)");
}

json manifest_base(const std::string& command, const Shared& sh) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["build_id"] = kBuildId;
    j["config"] = {{"path", sh.config_path}, {"digest_fnv1a64", fnv1a_hex(read_file(sh.config_path))}};
    j["outputs"] = json::array();
    return j;
}

// Emit the CSV to --out (recording it in the manifest) or to stdout.
void deliver(const Shared& sh, const std::string& csv, json manifest) {
    if (sh.out_path.empty()) {
        std::cout << csv;
        return;
    }
    write_file(sh.out_path, csv);
    manifest["outputs"].push_back(sh.out_path);
    const std::string mpath =
        sh.manifest_path.empty() ? sh.out_path + ".manifest.json" : sh.manifest_path;
    write_file(mpath, manifest.dump(2) + "\n");
    std::cerr << "wrote " << sh.out_path << " and " << mpath << "\n";
}

json sim_params_json(const SimConfig& cfg, const SimResult& r, double width_multiplier) {
    json j;
    j["lambda"] = cfg.lambda;
    j["z0"] = cfg.z0;
    j["n_paths"] = cfg.n_paths;
    j["seed"] = cfg.seed;
    j["eta"] = cfg.eta;
    j["tail_mode"] = cfg.tail_mode == TailMode::frictionless_value ? "frictionless_value" : "zero";
    j["dt"] = r.dt_used;
    j["horizon"] = r.horizon_used;
    j["width_multiplier"] = width_multiplier;
    j["rng"] = {{"stream", rng::kAlgorithmName}, {"gaussian", rng::kGaussianName}};
    return j;
}

json result_json(const SimResult& r) {
    json j;
    j["j_hat"] = r.j_hat;
    j["stderr"] = r.std_error;
    j["welfare_loss"] = r.welfare_loss;
    j["trades_per_year"] = r.trades_per_year;
    j["liquidation_fraction"] = r.liquidation_fraction;
    j["n_paths_effective"] = r.n_paths_effective;
    j["v_frictionless"] = r.v_frictionless;
    j["raw_j_mean"] = r.raw_j_mean;
    j["control_mean"] = r.control_mean;
    return j;
}

void apply_sim_overrides(SimConfig& sim, CLI::App* cmd, double lambda, std::int64_t paths,
                         std::uint64_t seed, double dt, double horizon, double z0) {
    const CLI::Option* lam = cmd->get_option_no_throw("--lambda");
    if (lam && lam->count()) sim.lambda = lambda;
    if (cmd->count("--paths")) sim.n_paths = paths;
    if (cmd->count("--seed")) sim.seed = seed;
    if (cmd->count("--dt")) sim.dt = dt;
    if (cmd->count("--horizon")) sim.horizon = horizon;
    if (cmd->count("--z0")) sim.z0 = z0;
}

int run(int argc, char** argv) {
    CLI::App app{"no-trade region asymptotics for fixed transaction costs"};
    app.require_subcommand(1);

    // ---- merton ----------------------------------------------------------
    Shared sh_merton;
    CLI::App* merton = app.add_subcommand("merton", "frictionless optimum and diagnostics");
    add_shared(merton, sh_merton, /*with_out=*/false);

    // ---- boundaries ------------------------------------------------------
    Shared sh_bound;
    double b_lambda = 0.0, b_zmin = 0.0, b_zmax = 0.0;
    int b_points = 50;
    CLI::App* bound = app.add_subcommand(
        "boundaries", "single-asset no-trade interval across a wealth grid (CSV)");
    add_shared(bound, sh_bound);
    bound->add_option("--lambda", b_lambda, "fixed cost")->required();
    bound->add_option("--z-min", b_zmin, "smallest wealth")->required();
    bound->add_option("--z-max", b_zmax, "largest wealth")->required();
    bound->add_option("--points", b_points, "grid size (log-spaced)")->capture_default_str();

    // ---- ellipsoid -------------------------------------------------------
    Shared sh_ell;
    double e_lambda = 0.0, e_wealth = 0.0;
    int e_points = 64;
    CLI::App* ell = app.add_subcommand(
        "ellipsoid", "two-asset no-trade boundary in weight space (CSV + manifest metadata)");
    add_shared(ell, sh_ell);
    ell->add_option("--lambda", e_lambda, "fixed cost")->required();
    ell->add_option("--wealth", e_wealth, "current wealth")->required();
    ell->add_option("--points", e_points, "boundary points")->capture_default_str();

    // ---- corrector -------------------------------------------------------
    Shared sh_corr;
    double c_wealth = 0.0;
    CLI::App* corr = app.add_subcommand("corrector", "single-asset corrector coefficients");
    add_shared(corr, sh_corr, /*with_out=*/false);
    corr->add_option("--wealth", c_wealth, "wealth level z")->required();

    // ---- simulate / scaling / sweep ---------------------------------------
    Shared sh_sim, sh_scal, sh_sweep;
    double s_lambda = 0.0, s_dt = 0.0, s_horizon = 0.0, s_z0 = 0.0, s_width = 1.0;
    std::int64_t s_paths = 0;
    std::uint64_t s_seed = 0;
    std::string scal_lambdas, sweep_multipliers;

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo welfare of the policy (CSV)");
    CLI::App* scal = app.add_subcommand("scaling", "welfare loss across fixed-cost levels (CSV)");
    CLI::App* swp = app.add_subcommand("sweep", "welfare across no-trade region widths (CSV)");
    add_shared(sim, sh_sim);
    add_shared(scal, sh_scal);
    add_shared(swp, sh_sweep);
    for (CLI::App* cmd : {sim, scal, swp}) {
        cmd->add_option("--paths", s_paths, "number of paths");
        cmd->add_option("--seed", s_seed, "RNG seed");
        cmd->add_option("--dt", s_dt, "time step (years)");
        cmd->add_option("--horizon", s_horizon, "horizon (years)");
        cmd->add_option("--z0", s_z0, "initial wealth");
    }
    sim->add_option("--lambda", s_lambda, "fixed cost");
    sim->add_option("--width", s_width, "no-trade region width multiplier")->capture_default_str();
    scal->add_option("--lambdas", scal_lambdas, "comma-separated fixed costs")->required();
    swp->add_option("--multipliers", sweep_multipliers, "comma-separated width multipliers")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (merton->parsed()) {
        const FileConfig fc = load_config(sh_merton.config_path);
        const MertonSolution sol = merton_solution(fc.market, fc.prefs);
        std::cout << "pi_m =";
        for (double p : sol.pi_m) std::cout << ' ' << g17(p);
        std::cout << "\nc_m = " << g17(sol.c_m) << "\nc_m_2gamma = "
                  << g17(consumption_rate(fc.market, fc.prefs.beta, 2.0 * fc.prefs.gamma))
                  << "\nv0 = " << g17(sol.v0) << "\nnu_half_minus_gamma = "
                  << g17(nu_exponent(sol, fc.prefs, fc.market, 0.5 - fc.prefs.gamma));
        const la::Vec sv = la::singular_values(sol.alpha);
        std::cout << "\nalpha_condition = " << g17(sv.back() / sv.front()) << "\n";
    }

    if (bound->parsed()) {
        const FileConfig fc = load_config(sh_bound.config_path);
        if (!(b_zmin > 0.0) || !(b_zmax >= b_zmin))
            fail(ErrKind::bad_input, "need 0 < z-min <= z-max");
        if (b_points < 1) fail(ErrKind::bad_input, "points must be >= 1");
        const MertonSolution sol = merton_solution(fc.market, fc.prefs);
        std::vector<BoundaryRow> rows;
        const double lo = std::log(b_zmin), hi = std::log(b_zmax);
        for (int i = 0; i < b_points; ++i) {
            const double f = b_points == 1 ? 0.0 : double(i) / double(b_points - 1);
            const double z = std::exp(lo + (hi - lo) * f);
            const auto [lower, upper] = trading_boundaries_1d(sol, fc.prefs, z, b_lambda);
            rows.push_back(BoundaryRow{z, lower, upper, sol.pi_m[0],
                                       equivalent_proportional_cost(sol, fc.prefs, z, b_lambda)});
        }
        json m = manifest_base("boundaries", sh_bound);
        m["parameters"] = {{"lambda", b_lambda}, {"z_min", b_zmin}, {"z_max", b_zmax},
                           {"points", b_points}, {"grid", "log"}};
        deliver(sh_bound, boundaries_csv(rows), std::move(m));
    }

    if (ell->parsed()) {
        const FileConfig fc = load_config(sh_ell.config_path);
        if (fc.market.d() != 2)
            fail(ErrKind::bad_input, "ellipsoid CSV emission requires exactly 2 risky assets");
        const MertonSolution sol = merton_solution(fc.market, fc.prefs);
        const NoTradeEllipsoid nt = ellipsoid_solution(sol, fc.prefs, fc.market);
        const auto pts = boundary_points(nt, e_wealth, e_lambda, e_points);
        std::vector<EllipsoidRow> rows;
        constexpr double two_pi = 6.283185307179586476925286766559;
        for (std::size_t k = 0; k < pts.size(); ++k)
            rows.push_back(EllipsoidRow{two_pi * double(k) / double(pts.size()), pts[k][0], pts[k][1]});
        json m = manifest_base("ellipsoid", sh_ell);
        m["parameters"] = {{"lambda", e_lambda}, {"wealth", e_wealth}, {"points", e_points}};
        m["solution"] = {{"M", {{nt.M(0, 0), nt.M(0, 1)}, {nt.M(1, 0), nt.M(1, 1)}}},
                         {"a0_tilde", nt.a0_tilde},
                         {"u0", nt.u0},
                         {"residual", nt.residual},
                         {"pi_m", {nt.pi_m[0], nt.pi_m[1]}}};
        deliver(sh_ell, ellipsoid_csv(rows), std::move(m));
    }

    if (corr->parsed()) {
        const FileConfig fc = load_config(sh_corr.config_path);
        const MertonSolution sol = merton_solution(fc.market, fc.prefs);
        const Corrector1D cw(sol, fc.prefs, fc.market);
        const CorrectorCoeffs cc = cw.coeffs(c_wealth);
        std::cout << "A = " << g17(cc.A) << "\nB = " << g17(cc.B) << "\nxi0 = " << g17(cc.xi0)
                  << "\na = " << g17(cc.a) << "\nu0 = " << g17(cw.u0()) << "\n";
    }

    if (sim->parsed()) {
        const FileConfig fc = load_config(sh_sim.config_path);
        SimConfig cfg = fc.sim;
        apply_sim_overrides(cfg, sim, s_lambda, s_paths, s_seed, s_dt, s_horizon, s_z0);
        SimOptions opts;
        opts.threads = sh_sim.threads;
        opts.width_multiplier = s_width;
        const SimResult r = estimate_welfare(cfg, opts);
        json m = manifest_base("simulate", sh_sim);
        m["parameters"] = sim_params_json(cfg, r, s_width);
        m["result"] = result_json(r);
        deliver(sh_sim, simulate_csv(cfg.lambda, r), std::move(m));
    }

    if (scal->parsed()) {
        const FileConfig fc = load_config(sh_scal.config_path);
        SimConfig cfg = fc.sim;
        apply_sim_overrides(cfg, scal, 0.0, s_paths, s_seed, s_dt, s_horizon, s_z0);
        SimOptions opts;
        opts.threads = sh_scal.threads;
        const std::vector<double> lambdas = parse_double_list(scal_lambdas, "--lambdas");
        const ScalingStudy st = scaling_study(cfg, lambdas, opts);
        std::cerr << "loss_slope = " << g17(st.loss_slope)
                  << "\ntrades_slope = " << g17(st.trades_slope) << "\n";
        json m = manifest_base("scaling", sh_scal);
        m["parameters"] = sim_params_json(cfg, st.points.front().result, 1.0);
        m["parameters"]["lambdas"] = lambdas;
        m["result"] = {{"loss_slope", st.loss_slope}, {"trades_slope", st.trades_slope}};
        deliver(sh_scal, scaling_csv(st), std::move(m));
    }

    if (swp->parsed()) {
        const FileConfig fc = load_config(sh_sweep.config_path);
        SimConfig cfg = fc.sim;
        apply_sim_overrides(cfg, swp, 0.0, s_paths, s_seed, s_dt, s_horizon, s_z0);
        SimOptions opts;
        opts.threads = sh_sweep.threads;
        const std::vector<double> mults = parse_double_list(sweep_multipliers, "--multipliers");
        const WidthSweep ws = width_sweep(cfg, mults, opts);
        json m = manifest_base("sweep", sh_sweep);
        m["parameters"] = sim_params_json(cfg, ws.points.front().result, 1.0);
        m["parameters"]["multipliers"] = mults;
        deliver(sh_sweep, sweep_csv(ws), std::move(m));
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C"); // '.' decimal point in every emitted number
    try {
        return run(argc, argv);
    } catch (const Error& err) {
        std::cerr << "error (" << errkind_name(err.kind()) << "): " << err.what() << "\n";
        switch (err.kind()) {
            case ErrKind::parse: return 2;
            case ErrKind::bad_input:
            case ErrKind::dimension:
            case ErrKind::infinite_value:
            case ErrKind::degenerate_region: return 3;
            case ErrKind::no_convergence:
            case ErrKind::residual_too_large:
            case ErrKind::insolvent: return 4;
        }
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}

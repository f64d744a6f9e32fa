// Python bindings: a single Model class wrapping market + preference
// parameters, with methods for the frictionless optimum, the no-trade
// region, loss coefficients, and Monte Carlo welfare estimates.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ntzone/corrector.hpp"
#include "ntzone/ellipsoid.hpp"
#include "ntzone/errors.hpp"
#include "ntzone/model.hpp"
#include "ntzone/policy.hpp"
#include "ntzone/simulate.hpp"
#include "ntzone/version.hpp"

#include <memory>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace ntzone;

namespace {

la::Mat to_mat(const std::vector<std::vector<double>>& rows, const char* name) {
    const std::size_t n = rows.size();
    la::Mat m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) fail(ErrKind::dimension, std::string(name) + " must be square");
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<double>> from_mat(const la::Mat& m) {
    std::vector<std::vector<double>> rows(m.n, std::vector<double>(m.n));
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) rows[i][j] = m(i, j);
    return rows;
}

class Model {
public:
    Model(double r, std::vector<double> mu, std::vector<std::vector<double>> sigma, double gamma,
          double beta)
        : market_{r, std::move(mu), to_mat(sigma, "sigma")}, prefs_{gamma, beta},
          merton_(merton_solution(market_, prefs_)) {}

    std::vector<double> pi_m() const { return merton_.pi_m; }
    double c_m() const { return merton_.c_m; }
    double v0() const { return merton_.v0; }
    std::size_t d() const { return market_.d(); }
    double value(double z) const { return frictionless_value(merton_, prefs_, market_, z); }
    double consumption(double gamma) const { return consumption_rate(market_, prefs_.beta, gamma); }

    const NoTradeEllipsoid& region() {
        if (!region_) region_ = std::make_unique<NoTradeEllipsoid>(
                          ellipsoid_solution(merton_, prefs_, market_));
        return *region_;
    }
    std::vector<std::vector<double>> no_trade_matrix() { return from_mat(region().M); }
    double u0() { return region().u0; }
    double riccati_residual() { return region().residual; }

    bool contains(const std::vector<double>& weights, double z, double lambda) {
        if (weights.size() != market_.d()) fail(ErrKind::dimension, "weights size mismatch");
        PortfolioState st;
        st.y.resize(weights.size());
        double risky = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            st.y[i] = weights[i] * z;
            risky += st.y[i];
        }
        st.x = z - risky;
        return nt_contains(st, region(), lambda);
    }
    std::vector<std::vector<double>> boundary(double z, double lambda, int n) {
        return boundary_points(region(), z, lambda, n);
    }

    std::pair<double, double> boundaries_1d(double z, double lambda) const {
        return trading_boundaries_1d(merton_, prefs_, z, lambda);
    }
    double equivalent_proportional_cost_1d(double z, double lambda) const {
        return ntzone::equivalent_proportional_cost(merton_, prefs_, z, lambda);
    }
    double certainty_equivalent_loss(double z, double lambda) {
        return ntzone::certainty_equivalent_loss(merton_, prefs_, region(), z, lambda);
    }
    py::dict corrector(double z) const {
        Corrector1D c(merton_, prefs_, market_);
        const CorrectorCoeffs k = c.coeffs(z);
        py::dict out;
        out["A"] = k.A;
        out["B"] = k.B;
        out["xi0"] = k.xi0;
        out["a"] = k.a;
        out["u0"] = c.u0();
        return out;
    }

    py::dict simulate(double lambda, double z0, std::int64_t n_paths, std::uint64_t seed,
                      double dt, double horizon, double width_multiplier, int threads) {
        SimConfig cfg;
        cfg.market = market_;
        cfg.prefs = prefs_;
        cfg.lambda = lambda;
        cfg.z0 = z0;
        cfg.n_paths = n_paths;
        cfg.seed = seed;
        cfg.dt = dt;
        cfg.horizon = horizon;
        SimOptions opts;
        opts.width_multiplier = width_multiplier;
        opts.threads = threads;
        const SimResult r = estimate_welfare(cfg, opts);
        py::dict out;
        out["j_hat"] = r.j_hat;
        out["stderr"] = r.std_error;
        out["welfare_loss"] = r.welfare_loss;
        out["trades_per_year"] = r.trades_per_year;
        out["liquidation_fraction"] = r.liquidation_fraction;
        out["n_paths"] = r.n_paths_effective;
        out["v_frictionless"] = r.v_frictionless;
        out["dt"] = r.dt_used;
        out["horizon"] = r.horizon_used;
        return out;
    }

private:
    MarketParams market_;
    Preferences prefs_;
    MertonSolution merton_;
    std::unique_ptr<NoTradeEllipsoid> region_;
};

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "no-trade region asymptotics for fixed transaction costs";
    m.attr("__version__") = kVersion;

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            if (e.kind() == ErrKind::bad_input || e.kind() == ErrKind::dimension ||
                e.kind() == ErrKind::parse)
                PyErr_SetString(PyExc_ValueError, e.what());
            else
                PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    py::class_<Model>(m, "Model")
        .def(py::init<double, std::vector<double>, std::vector<std::vector<double>>, double,
                      double>(),
             py::arg("r"), py::arg("mu"), py::arg("sigma"), py::arg("gamma"), py::arg("beta"))
        .def_property_readonly("pi_m", &Model::pi_m)
        .def_property_readonly("c_m", &Model::c_m)
        .def_property_readonly("v0", &Model::v0)
        .def_property_readonly("d", &Model::d)
        .def("value", &Model::value, py::arg("z"))
        .def("consumption_rate", &Model::consumption, py::arg("gamma"))
        .def("no_trade_matrix", &Model::no_trade_matrix)
        .def("u0", &Model::u0)
        .def("riccati_residual", &Model::riccati_residual)
        .def("contains", &Model::contains, py::arg("weights"), py::arg("z"), py::arg("lambda_"))
        .def("boundary_points", &Model::boundary, py::arg("z"), py::arg("lambda_"),
             py::arg("n") = 64)
        .def("boundaries_1d", &Model::boundaries_1d, py::arg("z"), py::arg("lambda_"))
        .def("equivalent_proportional_cost", &Model::equivalent_proportional_cost_1d,
             py::arg("z"), py::arg("lambda_"))
        .def("certainty_equivalent_loss", &Model::certainty_equivalent_loss, py::arg("z"),
             py::arg("lambda_"))
        .def("corrector", &Model::corrector, py::arg("z"))
        .def("simulate", &Model::simulate, py::arg("lambda_"), py::arg("z0"),
             py::arg("n_paths") = 1000, py::arg("seed") = 1, py::arg("dt") = 0.0,
             py::arg("horizon") = 0.0, py::arg("width_multiplier") = 1.0, py::arg("threads") = 0);
}

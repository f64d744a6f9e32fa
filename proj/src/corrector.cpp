#include "ntzone/corrector.hpp"

#include "ntzone/errors.hpp"

#include <cmath>
#include <limits>

namespace ntzone {

static void require_positive_wealth(double z) {
    if (!(z > 0.0)) fail(ErrKind::bad_input, "wealth z must be positive");
}

Corrector1D::Corrector1D(const MertonSolution& sol, const Preferences& prefs,
                         const MarketParams& market) {
    if (sol.d() != 1 || market.d() != 1)
        fail(ErrKind::dimension, "single-asset corrector requires d == 1");
    gamma_ = prefs.gamma;
    sigma_ = market.sigma(0, 0);
    pi_ = sol.pi_m[0];
    v0_ = sol.v0;

    const double cm2 = consumption_rate(market, prefs.beta, 2.0 * prefs.gamma);
    if (!(cm2 > 0.0))
        fail(ErrKind::infinite_value, "c_m(2 gamma) <= 0: loss coefficient undefined");
    // u0 = a0 / nu_{1/2-gamma} with a0 = sigma^2 |pi(1-pi)| sqrt(gamma/3) v0
    // and nu_{1/2-gamma} = c_m(2 gamma).
    u0_ = sigma_ * sigma_ * std::fabs(pi_ * (1.0 - pi_)) * std::sqrt(gamma_ / 3.0) * v0_ / cm2;
}

double Corrector1D::v_z(double z) const { return v0_ * std::pow(z, -gamma_); }

double Corrector1D::v_zz(double z) const { return -gamma_ * v0_ * std::pow(z, -gamma_ - 1.0); }

double Corrector1D::a(double z) const {
    require_positive_wealth(z);
    // a(z) = sigma sqrt(alpha^2 v_z (-v_zz) / 3), alpha = sigma pi (1-pi) z.
    const double alpha2 = sigma_ * sigma_ * pi_ * pi_ * (1.0 - pi_) * (1.0 - pi_) * z * z;
    return sigma_ * std::sqrt(alpha2 * v_z(z) * (-v_zz(z)) / 3.0);
}

double Corrector1D::A_coef(double z) const {
    require_positive_wealth(z);
    const double alpha2 = sigma_ * sigma_ * pi_ * pi_ * (1.0 - pi_) * (1.0 - pi_) * z * z;
    if (alpha2 == 0.0) return std::numeric_limits<double>::infinity();
    return a(z) / alpha2;
}

double Corrector1D::B_coef(double z) const {
    require_positive_wealth(z);
    const double alpha2 = sigma_ * sigma_ * pi_ * pi_ * (1.0 - pi_) * (1.0 - pi_) * z * z;
    if (alpha2 == 0.0) return std::numeric_limits<double>::infinity();
    return sigma_ * sigma_ * (-v_zz(z)) / (12.0 * alpha2);
}

double Corrector1D::xi0(double z) const {
    require_positive_wealth(z);
    return std::pow(12.0 / gamma_ * pi_ * pi_ * (1.0 - pi_) * (1.0 - pi_) * z * z * z, 0.25);
}

CorrectorCoeffs Corrector1D::coeffs(double z) const {
    return CorrectorCoeffs{A_coef(z), B_coef(z), xi0(z), a(z)};
}

double Corrector1D::w(double z, double xi) const {
    require_positive_wealth(z);
    const double x0 = xi0(z);
    if (std::fabs(xi) <= x0) {
        const double x2 = xi * xi;
        return A_coef(z) * x2 - B_coef(z) * x2 * x2;
    }
    return v_z(z);
}

CorrectorCoeffs corrector_coeffs(const MertonSolution& sol, const Preferences& prefs,
                                 const MarketParams& market, double z) {
    return Corrector1D(sol, prefs, market).coeffs(z);
}

double w_1d(const MertonSolution& sol, const Preferences& prefs, const MarketParams& market,
            double z, double xi) {
    return Corrector1D(sol, prefs, market).w(z, xi);
}

double u0_1d(const MertonSolution& sol, const Preferences& prefs, const MarketParams& market) {
    return Corrector1D(sol, prefs, market).u0();
}

} // namespace ntzone

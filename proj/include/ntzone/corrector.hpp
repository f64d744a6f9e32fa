#pragma once

#include "ntzone/model.hpp"

namespace ntzone {

// Quartic coefficients of the single-asset corrector at one wealth level:
// inside the no-trade interval w(z, xi) = A xi^2 - B xi^4, outside w = v_z(z),
// with |xi| = xi0 the matching point and a the ergodic cost level. At
// pi_m in {0, 1} the interval collapses: xi0 = a = 0 and A, B diverge.
struct CorrectorCoeffs {
    double A = 0.0;
    double B = 0.0;
    double xi0 = 0.0;
    double a = 0.0;
};

// Closed-form solution of the single-asset corrector problem. All quantities
// are evaluated on demand as functions of wealth; they scale as powers of z
// (xi0 ~ z^{3/4}, a ~ z^{1/2-gamma}).
class Corrector1D {
  public:
    // Throws DimensionError unless the market has exactly one risky asset.
    Corrector1D(const MertonSolution& sol, const Preferences& prefs, const MarketParams& market);

    double A_coef(double z) const;
    double B_coef(double z) const;
    double xi0(double z) const;   // currency half-width of the no-trade interval
    double a(double z) const;     // local ergodic cost, a(z) = a0 z^{1/2-gamma}
    CorrectorCoeffs coeffs(double z) const;

    // Piecewise corrector value: A xi^2 - B xi^4 for |xi| <= xi0(z), else v_z(z).
    double w(double z, double xi) const;

    // Coefficient of the leading welfare loss (lambda/z)^{1/2} u0 z^{1-gamma}
    // ... written as u(z) = u0 z^{1/2-gamma} so that the certainty-equivalent
    // loss fraction is u0 c_m^gamma (lambda/z)^{1/2}. Equals a0/nu_{1/2-gamma}.
    double u0() const { return u0_; }

    double v_z(double z) const;
    double v_zz(double z) const;

  private:
    double gamma_ = 0.0;
    double sigma_ = 0.0; // scalar volatility
    double pi_ = 0.0;    // Merton weight
    double v0_ = 0.0;    // c_m^{-gamma}
    double u0_ = 0.0;
};

// One-call conveniences mirroring the class methods.
CorrectorCoeffs corrector_coeffs(const MertonSolution& sol, const Preferences& prefs,
                                 const MarketParams& market, double z);
double w_1d(const MertonSolution& sol, const Preferences& prefs, const MarketParams& market,
            double z, double xi);

// u0 = sigma^2 sqrt(gamma/3 pi^2(1-pi)^2) c_m(gamma)^{-gamma} / c_m(2 gamma).
// Throws InfiniteValue when c_m(2 gamma) <= 0 (loss coefficient undefined).
double u0_1d(const MertonSolution& sol, const Preferences& prefs, const MarketParams& market);

} // namespace ntzone

#include "doctest.h"

#include "helpers.hpp"
#include "ntzone/ellipsoid.hpp"
#include "ntzone/errors.hpp"
#include "ntzone/model.hpp"

#include <cmath>

using namespace ntzone;
using namespace ntest;

TEST_CASE("frictionless solution anchors: single asset, gamma 2") {
    const MarketParams m = desk_market();
    const Preferences p = desk_prefs();
    const MertonSolution sol = merton_solution(m, p);
    REQUIRE(sol.d() == 1);
    CHECK(sol.pi_m[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sol.c_m == doctest::Approx(0.06).epsilon(1e-15));
    CHECK(sol.v0 == doctest::Approx(1.0 / (0.06 * 0.06)).epsilon(1e-14)); // 277.78
    CHECK_FALSE(sol.is_log);
    // alpha = (1 - pi) pi sigma = 0.5 * 0.5 * 0.2 = 0.05.
    CHECK(sol.alpha(0, 0) == doctest::Approx(0.05).epsilon(1e-14));
    // q = (0.04/0.2)^2 = 0.04.
    CHECK(sharpe_square(m) == doctest::Approx(0.04).epsilon(1e-14));
    // Consumption propensity at doubled curvature: c_m(4) = 0.03625.
    CHECK(consumption_rate(m, p.beta, 4.0) == doctest::Approx(0.03625).epsilon(1e-14));
    CHECK(consumption_rate(m, p.beta, 1.0) == doctest::Approx(p.beta).epsilon(1e-15));
    // Value function: v(z) = z^{-1} c_m^{-2} / (1-2) = -277.78 at z = 1.
    CHECK(frictionless_value(sol, p, m, 1.0) ==
          doctest::Approx(-277.7777777777778).epsilon(1e-13));
}

TEST_CASE("frictionless solution anchors: single asset, gamma 6") {
    const MertonSolution sol = merton_solution(ra6_market(), ra6_prefs());
    CHECK(sol.pi_m[0] == doctest::Approx(0.08 / (6.0 * 0.16 * 0.16)).epsilon(1e-14)); // 0.5208333
}

TEST_CASE("frictionless solution anchors: two assets") {
    // Uncorrelated, 40% vols: pi_m = (5/32, 5/32).
    const MertonSolution u = merton_solution(two_asset_market(0.0, 0.40), Preferences{2.0, 0.1});
    CHECK(u.pi_m[0] == doctest::Approx(5.0 / 32.0).epsilon(1e-13));
    CHECK(u.pi_m[1] == doctest::Approx(5.0 / 32.0).epsilon(1e-13));

    // Correlation 0.44 with vols 1/3 gives the same weights:
    // pi = (Sigma^{-1})(mu - r1)/gamma with Sigma = v^2 [[1, .44], [.44, 1]],
    // each component = 0.05 / (gamma v^2 (1 + 0.44)) = 5/32 when v = 1/3.
    const MertonSolution c =
        merton_solution(two_asset_market(0.44, 1.0 / 3.0), Preferences{2.0, 0.1});
    CHECK(c.pi_m[0] == doctest::Approx(5.0 / 32.0).epsilon(1e-13));
    CHECK(c.pi_m[1] == doctest::Approx(5.0 / 32.0).epsilon(1e-13));
}

TEST_CASE("log utility branch") {
    MarketParams m = desk_market();
    m.sigma(0, 0) = 0.25; // pi_m = 0.64 at gamma 1 (the desk vol would be fully invested)
    Preferences p{1.0, 0.07};
    const MertonSolution sol = merton_solution(m, p);
    CHECK(sol.is_log);
    CHECK(sol.c_m == doctest::Approx(0.07).epsilon(1e-15)); // c_m = beta at gamma 1
    CHECK(sol.v0 == doctest::Approx(1.0 / 0.07).epsilon(1e-14));
    // v(z) = log(beta z)/beta + (r + q/2 - beta)/beta^2, q = (mu - r)^2/sigma^2 = 0.0256.
    const double expected =
        std::log(0.07 * 2.5) / 0.07 + (0.01 + 0.0128 - 0.07) / (0.07 * 0.07);
    CHECK(frictionless_value(sol, p, m, 2.5) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(crra_utility(1.0, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("crra utility") {
    CHECK(crra_utility(2.0, 0.25) == doctest::Approx(-4.0).epsilon(1e-15));
    CHECK(crra_utility(0.5, 4.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(crra_utility(3.0, 10.0) == doctest::Approx(-0.005).epsilon(1e-14));
}

TEST_CASE("value function scales as z^{1-gamma}") {
    for (std::uint64_t i = 0; i < 50; ++i) {
        const RandomMarket rm = random_market(301, i, 1 + i % 3);
        const double z = 0.3 + 4.0 * (double(i) / 50.0);
        const double k = 3.7;
        const double v1 = frictionless_value(rm.sol, rm.prefs, rm.market, z);
        const double vk = frictionless_value(rm.sol, rm.prefs, rm.market, k * z);
        if (rm.sol.is_log) {
            CHECK(vk - v1 == doctest::Approx(std::log(k) / rm.prefs.beta).epsilon(1e-11));
        } else {
            CHECK(vk == doctest::Approx(std::pow(k, 1.0 - rm.prefs.gamma) * v1).epsilon(1e-11));
        }
    }
}

TEST_CASE("eigenvalue identity nu_{1/2 - gamma} = c_m(2 gamma) across random draws") {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const RandomMarket rm = random_market(77, i, 1 + i % 4);
        const double lhs =
            nu_exponent(rm.sol, rm.prefs, rm.market, 0.5 - rm.prefs.gamma);
        const double rhs = consumption_rate(rm.market, rm.prefs.beta, 2.0 * rm.prefs.gamma);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("nu at p = 1 - gamma recovers the consumption rate") {
    // The value-function exponent itself: nu_{1-gamma} = c_m.
    for (std::uint64_t i = 0; i < 200; ++i) {
        const RandomMarket rm = random_market(55, i, 1 + i % 2);
        const double lhs = nu_exponent(rm.sol, rm.prefs, rm.market, 1.0 - rm.prefs.gamma);
        CHECK(lhs == doctest::Approx(rm.sol.c_m).epsilon(1e-10));
    }
}

TEST_CASE("input validation") {
    const Preferences p = desk_prefs();
    {
        MarketParams m = desk_market();
        m.r = 0.0;
        CHECK_THROWS_AS(merton_solution(m, p), Error);
    }
    {
        MarketParams m = desk_market();
        m.mu = {0.01}; // mu == r: no excess return
        CHECK_THROWS_AS(merton_solution(m, p), Error);
    }
    {
        MarketParams m = desk_market();
        CHECK_THROWS_AS(merton_solution(m, Preferences{0.0, 0.1}), Error);
        CHECK_THROWS_AS(merton_solution(m, Preferences{2.0, 0.0}), Error);
        CHECK_THROWS_AS(merton_solution(m, Preferences{-1.0, 0.1}), Error);
    }
    {
        // Singular covariance: identical assets.
        MarketParams m = two_asset_market(0.0, 0.4);
        m.sigma(1, 0) = m.sigma(0, 0);
        m.sigma(1, 1) = m.sigma(0, 1);
        CHECK_THROWS_AS(merton_solution(m, p), Error);
    }
    {
        // Dimension mismatch between mu and sigma.
        MarketParams m = desk_market();
        m.mu = {0.05, 0.05};
        CHECK_THROWS_AS(merton_solution(m, p), Error);
    }
    {
        // z <= 0 rejected by the value function.
        const MarketParams m = desk_market();
        const MertonSolution sol = merton_solution(m, p);
        CHECK_THROWS_AS(frictionless_value(sol, p, m, 0.0), Error);
        CHECK_THROWS_AS(frictionless_value(sol, p, m, -1.0), Error);
    }
}

TEST_CASE("c_m <= 0 is flagged as an infinite value") {
    // gamma < 1 with a large Sharpe ratio and tiny impatience pushes the
    // consumption propensity negative: no finite value function exists.
    MarketParams m;
    m.r = 0.01;
    m.mu = {0.31};
    m.sigma = la::Mat(1);
    m.sigma(0, 0) = 0.2;
    try {
        merton_solution(m, Preferences{0.5, 0.01});
        FAIL("expected InfiniteValue");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrKind::infinite_value);
    }
}

TEST_CASE("degenerate weight loadings are rejected") {
    // A fully invested frictionless optimum makes the deviation loadings
    // alpha = (I - pi 1^T) diag(pi) sigma vanish (single asset) or lose rank
    // (weights summing to one), and the no-trade construction has nothing to
    // work with. merton_solution owns that validation.
    const Preferences p{2.0, 0.1};
    // pi_m = 1 (all wealth in the risky asset): mu - r = gamma sigma^2.
    {
        MarketParams m;
        m.r = 0.01;
        m.mu = {0.01 + 2.0 * 0.04};
        m.sigma = la::Mat(1);
        m.sigma(0, 0) = 0.2;
        try {
            merton_solution(m, p);
            FAIL("expected DegenerateRegion");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrKind::degenerate_region);
        }
    }
    // Weights summing to one (fully invested across two assets).
    {
        MarketParams m;
        m.r = 0.02;
        m.mu = {0.02 + 0.16, 0.02 + 0.16}; // pi = (1/2, 1/2) at gamma 2, vol 0.4
        m.sigma = la::Mat(2);
        m.sigma(0, 0) = m.sigma(1, 1) = 0.4;
        try {
            merton_solution(m, p);
            FAIL("expected DegenerateRegion");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrKind::degenerate_region);
        }
    }
}

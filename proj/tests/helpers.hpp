#pragma once

// Shared test fixtures: reference market configurations and a deterministic
// generator of random admissible markets for property tests.

#include "ntzone/errors.hpp"
#include "ntzone/model.hpp"
#include "ntzone/rng.hpp"

#include <cmath>
#include <cstddef>

namespace ntest {

using namespace ntzone;

// Single risky asset, gamma = 2, pi_m = 0.5: the workhorse for closed-form
// anchors (c_m = 0.06, v0 = 277.78, u0 = 62.567).
inline MarketParams desk_market() {
    MarketParams m;
    m.r = 0.01;
    m.mu = {0.05};
    m.sigma = la::Mat(1);
    m.sigma(0, 0) = 0.2;
    return m;
}
inline Preferences desk_prefs() { return Preferences{2.0, 0.1}; }

// Single risky asset, gamma = 6, pi_m = 25/48: the boundary/equivalent-cost
// reference case.
inline MarketParams ra6_market() {
    MarketParams m;
    m.r = 0.02;
    m.mu = {0.10};
    m.sigma = la::Mat(1);
    m.sigma(0, 0) = 0.16;
    return m;
}
inline Preferences ra6_prefs() { return Preferences{6.0, 0.1}; }

// Two identical risky assets, excess return 5%. correlation = 0 pairs with
// 40% vols, 0.44 with vols 1/3, keeping pi_m = (5/32, 5/32) in both cases.
inline MarketParams two_asset_market(double corr, double vol) {
    MarketParams m;
    m.r = 0.02;
    m.mu = {0.07, 0.07};
    la::Mat c(2);
    c(0, 0) = c(1, 1) = 1.0;
    c(0, 1) = c(1, 0) = corr;
    la::Mat l(2);
    l(0, 0) = 1.0;
    l(1, 0) = corr;
    l(1, 1) = std::sqrt(1.0 - corr * corr);
    m.sigma = la::Mat(2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) m.sigma(i, j) = vol * l(i, j);
    return m;
}

// Random admissible market + preferences: retried until the frictionless
// solution exists and is non-degenerate (c_m > 0, c_m(2 gamma) > 0, alpha
// invertible). Deterministic in (seed, counter).
struct RandomMarket {
    MarketParams market;
    Preferences prefs;
    MertonSolution sol;
};

inline RandomMarket random_market(std::uint64_t seed, std::uint64_t index, std::size_t d) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        rng::Stream gen(seed ^ (0x517cc1b727220a95ULL * (attempt + 1)), index);
        MarketParams m;
        m.r = 0.005 + 0.045 * gen.next_uniform();
        m.mu.resize(d);
        for (std::size_t i = 0; i < d; ++i) m.mu[i] = m.r + 0.01 + 0.11 * gen.next_uniform();
        // sigma = diag(vols) * chol(C) with C a random SPD correlation matrix.
        la::Vec vols(d);
        for (std::size_t i = 0; i < d; ++i) vols[i] = 0.1 + 0.4 * gen.next_uniform();
        la::Mat b(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) b(i, j) = gen.next_normal();
        la::Mat g = b * la::transpose(b);
        for (std::size_t i = 0; i < d; ++i) g(i, i) += double(d);
        la::Mat corr(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                corr(i, j) = g(i, j) / std::sqrt(g(i, i) * g(j, j));
        la::Mat l = la::cholesky(corr);
        m.sigma = la::Mat(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m.sigma(i, j) = vols[i] * l(i, j);

        Preferences p;
        p.gamma = 0.6 + 7.4 * gen.next_uniform();
        if ((index + attempt) % 17 == 0) p.gamma = 1.0; // exercise the log-utility branch
        p.beta = 0.03 + 0.27 * gen.next_uniform();
        try {
            MertonSolution sol = merton_solution(m, p);
            if (!(consumption_rate(m, p.beta, 2.0 * p.gamma) > 0.0)) continue;
            return RandomMarket{m, p, sol};
        } catch (const Error&) {
            continue; // c_m <= 0 or degenerate alpha: redraw
        }
    }
}

} // namespace ntest

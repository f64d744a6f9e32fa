#include "doctest.h"

#include "ntzone/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using namespace ntzone;

TEST_CASE("normal_icdf matches tabulated quantiles") {
    // Reference values for the standard normal quantile function.
    CHECK(rng::normal_icdf(0.5) == 0.0);
    CHECK(rng::normal_icdf(0.975) == doctest::Approx(1.9599639845400545).epsilon(1e-14));
    CHECK(rng::normal_icdf(0.841344746068543) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rng::normal_icdf(0.99865010196837) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(rng::normal_icdf(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
    // Antisymmetry about p = 1/2.
    for (double p : {0.001, 0.01, 0.1, 0.3, 0.49}) {
        CHECK(rng::normal_icdf(p) == doctest::Approx(-rng::normal_icdf(1.0 - p)).epsilon(1e-13));
    }
    // Monotone over a grid.
    double prev = rng::normal_icdf(1e-8);
    for (int i = 1; i <= 1000; ++i) {
        const double p = 1e-8 + (1.0 - 2e-8) * double(i) / 1000.0;
        const double v = rng::normal_icdf(p);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("streams are deterministic in (seed, index) and decorrelated") {
    rng::Stream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool same_ab = true, same_ac = true, same_ad = true;
    for (int i = 0; i < 256; ++i) {
        const std::uint64_t ua = a.next_u64();
        same_ab = same_ab && (ua == b.next_u64());
        same_ac = same_ac && (ua == c.next_u64());
        same_ad = same_ad && (ua == d.next_u64());
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
    CHECK_FALSE(same_ad);
}

TEST_CASE("uniforms live strictly inside (0,1) and have the right moments") {
    rng::Stream g(20170206, 0);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0, lo = 1.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = g.next_uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        sum += u;
        sumsq += u * u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    // mean se ~ 1/sqrt(12 n) ~ 6.5e-4: allow 5 sigma.
    CHECK(std::abs(mean - 0.5) < 3.3e-3);
    CHECK(std::abs(var - 1.0 / 12.0) < 2e-3);
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("normals have standard moments") {
    rng::Stream g(11, 3);
    const int n = 200000;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = g.next_normal();
        s1 += x;
        s2 += x * x;
        s3 += x * x * x;
        s4 += x * x * x * x;
    }
    CHECK(std::abs(s1 / n) < 0.012);       // se ~ 0.0022
    CHECK(std::abs(s2 / n - 1.0) < 0.016); // se ~ 0.0032
    CHECK(std::abs(s3 / n) < 0.06);
    CHECK(std::abs(s4 / n - 3.0) < 0.15);
}

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "franson/numerics.hpp"
#include "oracles.hpp"

namespace fm = franson::math;

TEST(Erf, MatchesQuadratureOracle) {
    for (double x = -4.0; x <= 4.0; x += 0.125) {
        EXPECT_NEAR(fm::erf(x), oracle::erf_quadrature(x), 1e-9) << "x = " << x;
    }
}

TEST(Erf, MatchesStdErfToTwelveDigits) {
    for (double x = -7.0; x <= 7.0; x += 0.01) {
        EXPECT_NEAR(fm::erf(x), std::erf(x), 1e-12) << "x = " << x;
    }
}

TEST(Erf, OddAndSaturating) {
    oracle::Gen gen(11);
    for (int i = 0; i < 1000; ++i) {
        const double x = gen.uniform(-10.0, 10.0);
        EXPECT_EQ(fm::erf(-x), -fm::erf(x));
    }
    EXPECT_EQ(fm::erf(0.0), 0.0);
    EXPECT_EQ(fm::erf(8.0), 1.0);
    EXPECT_EQ(fm::erf(-30.0), -1.0);
}

TEST(Erf, ReferenceValue) {
    // erf(sqrt(ln 2) * 2), the capture at tau = 2 sigma
    EXPECT_NEAR(fm::erf(1.6651092223153954), 0.9814683222, 1e-10);
}

TEST(Linspace, EndpointsAndSpacing) {
    const auto v = fm::linspace(0.0, 1.0, 11);
    ASSERT_EQ(v.size(), 11u);
    EXPECT_EQ(v.front(), 0.0);
    EXPECT_EQ(v.back(), 1.0);
    EXPECT_NEAR(v[3], 0.3, 1e-15);
    EXPECT_EQ(fm::linspace(2.0, 5.0, 1).size(), 1u);
}

TEST(DeriveSeed, DeterministicAndDistinct) {
    static_assert(fm::derive_seed(1, 2) == fm::derive_seed(1, 2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 50; ++s) {
        for (std::uint64_t k = 0; k < 50; ++k) {
            seen.insert(fm::derive_seed(s, k));
        }
    }
    EXPECT_EQ(seen.size(), 2500u);
}

#include <gtest/gtest.h>

#include <cmath>

#include "duosim/numeric.hpp"

using namespace duosim::numeric;

TEST(Cubic, ThreeRealRoots) {
    // (x-1)(x-2)(x+3) = x^3 - 7x + 6
    const auto r = cubic_real_roots({1.0, 0.0, -7.0, 6.0});
    ASSERT_EQ(r.size(), 3u);
    EXPECT_NEAR(r[0], -3.0, 1e-13);
    EXPECT_NEAR(r[1], 1.0, 1e-13);
    EXPECT_NEAR(r[2], 2.0, 1e-13);
}

TEST(Cubic, OneRealRoot) {
    // (x-2)(x^2+1)
    const auto r = cubic_real_roots({1.0, -2.0, 1.0, -2.0});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], 2.0, 1e-13);
}

TEST(Cubic, RepeatedRootReportedOnce) {
    // (x-1)^2 (x+2) = x^3 - 3x + 2
    const auto r = cubic_real_roots({1.0, 0.0, -3.0, 2.0});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0], -2.0, 1e-12);
    EXPECT_NEAR(r[1], 1.0, 1e-7);
}

TEST(Cubic, DegeneratesToQuadratic) {
    const auto r = cubic_real_roots({0.0, 1.0, -3.0, 2.0});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0], 1.0, 1e-15);
    EXPECT_NEAR(r[1], 2.0, 1e-15);
    EXPECT_THROW(cubic_real_roots({0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(Cubic, ResidualsVanish) {
    for (int k = 0; k < 50; ++k) {
        const std::array<double, 4> c{1.0 + k * 0.1, -3.0 + k * 0.2, 0.5 - k * 0.07, 0.3 * std::sin(k)};
        for (double x : cubic_real_roots(c)) EXPECT_NEAR(cubic_value(c, x), 0.0, 1e-10);
    }
}

TEST(GoldenSection, InteriorAndBoundaryMaxima) {
    auto m = golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-12);
    EXPECT_NEAR(m.argmax, 0.3, 1e-6);
    m = golden_section_max([](double x) { return x; }, 0.0, 2.0, 1e-12);
    EXPECT_EQ(m.argmax, 2.0);
    m = golden_section_max([](double x) { return -x; }, 0.5, 0.5, 1e-12);
    EXPECT_EQ(m.argmax, 0.5);
    EXPECT_THROW(golden_section_max([](double x) { return x; }, 1.0, 0.0, 1e-9), std::invalid_argument);
}

#include <multifrac/numeric.hpp>

#include "test_support.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

using namespace multifrac;

TEST(Numeric, DigammaTrigammaKnownValues) {
    EXPECT_NEAR(digamma(1.0), -0.57721566490153286, 1e-13);
    EXPECT_NEAR(digamma(0.5), -1.9635100260214235, 1e-13);
    EXPECT_NEAR(trigamma(1.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-12);
    EXPECT_NEAR(trigamma(0.5), std::numbers::pi * std::numbers::pi / 2.0, 1e-12);
}

TEST(Numeric, DigammaRecurrence) {
    for (double x : {0.3, 1.7, 4.2, 25.0}) EXPECT_NEAR(digamma(x + 1.0) - digamma(x), 1.0 / x, 1e-12);
}

TEST(Numeric, CompensatedSumBeatsNaive) {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000000; ++i) s.add(1e-16);
    EXPECT_NEAR(s.value(), 1.0 + 1e-10, 1e-15);
}

TEST(Numeric, TrapezoidExactForLinear) {
    const auto x = logspace(0.1, 10.0, 50);
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v - 1.0);
    EXPECT_NEAR(trapezoid(x, y).value, 1.5 * (100.0 - 0.01) - 9.9, 1e-10);
}

TEST(Numeric, SplineReproducesLinearData) {
    CubicSpline sp({0.0, 1.0, 2.5, 4.0}, {1.0, 3.0, 6.0, 9.0});
    EXPECT_NEAR(sp(1.7), 4.4, 1e-12);
    EXPECT_NEAR(sp.derivative(3.1), 2.0, 1e-12);
}

TEST(Numeric, GoldenSectionFindsParabolaPeak) {
    const auto f = [](double x) { return -(x - 0.3) * (x - 0.3); };
    EXPECT_NEAR(golden_section_max(f, 0.0, 1.0, 1e-10), 0.3, 1e-8);
}

TEST(Numeric, Gauss8IntegratesDegree15) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 8; ++i) sum += gauss8_weights()[i] * std::pow(gauss8_nodes()[i], 14);
    EXPECT_NEAR(sum, 2.0 / 15.0, 1e-14);
}

TEST(Numeric, Smoothstep9Endpoints) {
    EXPECT_DOUBLE_EQ(smoothstep9(0.0), 0.0);
    EXPECT_DOUBLE_EQ(smoothstep9(1.0), 1.0);
    EXPECT_NEAR(smoothstep9(0.5), 0.5, 1e-15);
    for (int k = 1; k <= 4; ++k) {
        EXPECT_NEAR(smoothstep9(0.0, k), 0.0, 1e-12);
        EXPECT_NEAR(smoothstep9(1.0, k), 0.0, 1e-12);
    }
}

TEST(Numeric, GridsIncludeEnds) {
    const auto a = arange(-1.0, 1.0, 0.1);
    EXPECT_EQ(a.size(), 21u);
    EXPECT_DOUBLE_EQ(a.back(), 1.0);
    const auto l = logspace(1.0, 1000.0, 4);
    EXPECT_NEAR(l[1], 10.0, 1e-12);
}

TEST(Numeric, ParallelForVisitsEachIndexOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

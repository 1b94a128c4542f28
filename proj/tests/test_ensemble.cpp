#include <multifrac/ensemble.hpp>

#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace multifrac;

TEST(GridField, WrapsIndices) {
    GridField f(3, 4, 2);
    f.at({1, 2, 3}, 1) = 7.0;
    EXPECT_EQ(f.at({5, -2, -1}, 1), 7.0);
    EXPECT_EQ(f.values().size(), 4u * 4 * 4 * 2);
}

TEST(GridField, RejectsNonFinite) {
    GridField f(1, 8, 1);
    f.values()[3] = std::nan("");
    EXPECT_MF_ERROR(f.validate(), ErrorKind::argument);
}

TEST(Directions, DefaultSetsAreUnitAndSymmetric) {
    const auto d3 = default_directions(3);
    ASSERT_EQ(d3.size(), 14u);
    for (const auto& d : d3) {
        const auto& v = d.vec();
        EXPECT_NEAR(v[0] * v[0] + v[1] * v[1] + v[2] * v[2], 1.0, 1e-15);
    }
    EXPECT_EQ(default_directions(1).size(), 2u);
    EXPECT_EQ(axis_directions(3).size(), 6u);
}

TEST(Directions, RandomAreReproducible) {
    const auto a = random_directions(3, 5, 42), b = random_directions(3, 5, 42);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(a[i].vec(), b[i].vec());
}

TEST(Increments, SineFieldMatchesClosedForm) {
    // u = sin(2 pi x): |du| = 2 sin(pi l) |cos(2 pi x + pi l)|.
    const std::size_t n = 64;
    GridField f(1, n, 1);
    for (std::size_t i = 0; i < n; ++i) f.values()[i] = std::sin(2.0 * std::numbers::pi * double(i) / double(n));
    const double ell = 4.0 / n;
    const auto dirs = axis_directions(1);
    const auto ens = increments(f, ell, dirs);
    ASSERT_EQ(ens.size(), 2 * n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = double(i) / double(n);
        const double exact = 2.0 * std::sin(std::numbers::pi * ell) *
                             std::abs(std::cos(2.0 * std::numbers::pi * x + std::numbers::pi * ell));
        worst = std::max(worst, std::abs(ens.magnitudes[i] - exact));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Increments, RejectsScaleBelowGrid) {
    GridField f(1, 16, 1);
    const auto dirs = axis_directions(1);
    EXPECT_THROW(increments(f, 1.0 / 64, dirs), Error);
}

TEST(Moments, TwoAtomClosedForm) {
    const auto ens = mft::two_atoms();
    const double grid[] = {-2.0, 0.0, 1.0, 3.0};
    const auto tab = moments(ens, grid);
    for (std::size_t i = 0; i < 4; ++i) {
        const double p = grid[i];
        EXPECT_NEAR(tab.moments[i], 0.5 * (1.0 + std::pow(2.0, p)), 1e-14);
        EXPECT_NEAR(tab.log_moments[i], 0.5 * std::pow(2.0, p) * std::numbers::ln2, 1e-14);
    }
    EXPECT_NEAR(tab.ln_moments[1], 0.0, 1e-15);
}

TEST(Moments, ZeroAtomMakesNegativeOrdersInfinite) {
    const auto ens = IncrementEnsemble::atomic(0.1, {0.0, 1.0, 2.0}, {0.2, 0.4, 0.4});
    const double grid[] = {-1.0, -0.5, 0.0, 1.0, 2.0};
    const auto tab = moments(ens, grid);
    EXPECT_NEAR(tab.zero_fraction, 0.2, 1e-15);
    EXPECT_FALSE(tab.finite(0));
    EXPECT_TRUE(tab.finite(3));
    const auto dom = effective_domain(tab);
    ASSERT_FALSE(dom.empty);
    // 0^0 ln 0 diverges, so p = 0 itself is excluded.
    EXPECT_EQ(dom.first, 3u);
    EXPECT_FALSE(dom.p_min_infinite);
}

TEST(Moments, LargeOrdersStayFiniteInLogForm) {
    const auto ens = IncrementEnsemble::atomic(0.1, {1e10, 1.0}, {0.5, 0.5});
    const double grid[] = {40.0};
    const auto tab = moments(ens, grid);
    EXPECT_TRUE(std::isinf(tab.moments[0]));
    EXPECT_NEAR(tab.ln_moments[0], 400.0 * std::log(10.0) + std::log(0.5), 1e-9);
}

TEST(Ensemble, RejectsBadInput) {
    EXPECT_MF_ERROR(IncrementEnsemble::atomic(0.1, {1.0, -1.0}, {0.5, 0.5}), ErrorKind::argument);
    EXPECT_MF_ERROR(IncrementEnsemble::atomic(0.1, {1.0}, {0.5, 0.5}), ErrorKind::argument);
}

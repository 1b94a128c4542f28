#include <multifrac/mfr.hpp>
#include <multifrac/volumetrics.hpp>

#include "test_support.hpp"

#include <cmath>

using namespace multifrac;

namespace {

// zeta = p/3 - a p^2 on a fine grid: d_h = 3 - (1/3 - h)^2 / (4a).
ScalingProfile quadratic(double a) {
    const auto p = arange(-6.0, 10.0, 0.005);
    std::vector<double> z, z1, z2;
    for (double x : p) {
        z.push_back(x / 3.0 - a * x * x);
        z1.push_back(1.0 / 3.0 - 2.0 * a * x);
        z2.push_back(-2.0 * a);
    }
    return ScalingProfile::from_curves(0.01, p, z, z1, z2, {p.front(), p.back(), true, true});
}

}  // namespace

TEST(Legendre, QuadraticClosedForm) {
    constexpr double a = 0.02;
    const auto prof = quadratic(a);
    const std::vector<double> h{0.2, 1.0 / 3.0, 0.45};
    const auto spec = legendre(prof, h);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double exact = 3.0 - (1.0 / 3.0 - h[i]) * (1.0 / 3.0 - h[i]) / (4.0 * a);
        EXPECT_NEAR(spec.d[i], exact, 1e-4) << h[i];
        EXPECT_NEAR(spec.argmin_p[i], (1.0 / 3.0 - h[i]) / (2.0 * a), 0.01);
    }
    EXPECT_NEAR(spec.peak_d, 3.0, 1e-12);
    EXPECT_NEAR(spec.peak_h, 1.0 / 3.0, 1e-12);
}

TEST(Legendre, InverseRoundTrip) {
    const auto prof = quadratic(0.01);
    std::vector<double> h(prof.zeta1.rbegin(), prof.zeta1.rend());
    const auto spec = legendre(prof, h);
    const std::vector<double> p{-4.0, 0.0, 2.0, 7.5};
    const auto back = inverse_legendre(spec, p);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(back[i], p[i] / 3.0 - 0.01 * p[i] * p[i], 1e-9);
}

TEST(Legendre, ParametricMatchesMinimization) {
    const auto tab = moments(mft::two_atoms(), arange(-3.0, 4.0, 0.05));
    const auto prof = zeta(tab);
    std::vector<double> D;
    for (double p : prof.p_grid) D.push_back(dimension_p(tab, p));
    const auto par = dh_from_Dp(D, prof);
    EXPECT_LT(par.max_deviation, 1e-9);
}

TEST(Legendre, OutsideHolderRangeFlagged) {
    const auto prof = zeta(moments(mft::two_atoms(), arange(-3.0, 4.0, 0.5)));
    const std::vector<double> h{-2.0, -0.3, 1.0};
    const auto spec = legendre(prof, h);
    EXPECT_TRUE(spec.outside[0]);
    EXPECT_FALSE(spec.outside[1]);
    EXPECT_TRUE(spec.outside[2]);
}

TEST(Legendre, WidthIdentityOnAtoms) {
    const auto ens = IncrementEnsemble::atomic(0.1, {0.2, 1.0, 3.0}, {0.3, 0.5, 0.2});
    const auto prof = zeta(moments(ens, arange(-40.0, 40.0, 0.05)));
    const auto w = spectrum_width_check(prof);
    EXPECT_TRUE(w.pass);
    EXPECT_NEAR(w.width, std::log(15.0) / std::log(10.0), 1e-12);
    EXPECT_LT(w.residual, 1e-8);
}

TEST(Legendre, ActiveRegionBoundHolds) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto ens = mft::random_atoms(rng);
        const auto prof = zeta(moments(ens, arange(-3.0, 6.0, 0.05)));
        const auto hr = holder_range(prof);
        const double h = 0.5 * (hr.h_min + hr.h_max);
        EXPECT_TRUE(active_region_bound_check(ens, prof, h, 0.5, 2.0).pass);
    }
}

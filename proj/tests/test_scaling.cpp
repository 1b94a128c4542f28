#include <multifrac/scaling.hpp>

#include "test_support.hpp"

#include <cmath>

using namespace multifrac;

namespace {

ScalingProfile two_atom_profile() {
    const auto grid = arange(-3.0, 4.0, 0.5);
    return zeta(moments(mft::two_atoms(), grid));
}

}  // namespace

// Frozen from ln((1 + 2^p)/2) and its p-derivatives at ln ell = -1.
TEST(Zeta, TwoAtomOracle) {
    const auto prof = two_atom_profile();
    struct Row { double p, z, z1, z2; };
    for (const Row& r : {Row{2.0, -0.9162907318741551, -0.5545177444479562, -0.07687248222691223},
                         Row{-1.5, 0.3904139049463373, -0.18105272948244988, -0.09271609812039744},
                         Row{0.5, -0.18822640645959765, -0.40603621765134346, -0.11657744942564383}}) {
        const auto i = prof.index_of(r.p);
        EXPECT_NEAR(prof.zeta[i], r.z, 1e-13) << r.p;
        EXPECT_NEAR(prof.zeta1[i], r.z1, 1e-13) << r.p;
        EXPECT_NEAR(prof.zeta2[i], r.z2, 1e-13) << r.p;
    }
}

TEST(Zeta, HolderLimitsFromExtremeAtoms) {
    const auto prof = two_atom_profile();
    ASSERT_TRUE(prof.h_min_limit && prof.h_max_limit);
    EXPECT_NEAR(*prof.h_min_limit, -std::log(2.0), 1e-12);
    EXPECT_NEAR(*prof.h_max_limit, 0.0, 1e-12);
    // The grid range sits strictly inside the limits.
    const auto hr = holder_range(prof);
    EXPECT_GT(hr.h_min, *prof.h_min_limit);
    EXPECT_LT(hr.h_max, *prof.h_max_limit);
}

TEST(Zeta, PropertiesOnRandomEnsembles) {
    std::mt19937_64 rng(11);
    const auto grid = arange(-2.0, 5.0, 0.25);
    for (int trial = 0; trial < 200; ++trial) {
        const auto ens = mft::random_atoms(rng);
        const auto prof = zeta(moments(ens, grid));
        EXPECT_NEAR(prof.zeta[prof.index_of(0.0)], 0.0, 1e-14);
        // Concavity in p and monotone slope.
        for (std::size_t i = 0; i < prof.size(); ++i) EXPECT_LE(prof.zeta2[i], 1e-12);
        for (std::size_t i = 1; i < prof.size(); ++i) EXPECT_LE(prof.zeta1[i], prof.zeta1[i - 1] + 1e-12);
        EXPECT_TRUE(ratio_bounds_check(prof).pass);
    }
}

TEST(Zeta, ScalingMagnitudesShiftsLinearly) {
    // f -> lambda f adds p ln(lambda)/ln(ell) to zeta.
    const auto ens = mft::two_atoms();
    const double lambda = 3.5;
    const auto grid = arange(-2.0, 3.0, 0.5);
    const auto a = zeta(moments(ens, grid)), b = zeta(moments(ens.scaled(lambda), grid));
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_NEAR(b.zeta[i] - a.zeta[i], a.p_grid[i] * std::log(lambda) / std::log(ens.ell), 1e-12);
}

TEST(Zeta, ConstantMagnitudeIsLinearAndK41) {
    const auto ens = IncrementEnsemble::uniform(0.01, std::vector<double>(10, 0.3));
    const auto prof = zeta(moments(ens, arange(-2.0, 4.0, 0.5)));
    for (std::size_t i = 0; i < prof.size(); ++i) EXPECT_NEAR(prof.zeta2[i], 0.0, 1e-14);
    const auto ends = classify_endpoints(prof);
    ASSERT_EQ(ends.size(), 2u);
    for (const auto& e : ends) {
        EXPECT_EQ(e.label, 5);
        EXPECT_TRUE(e.k41_consistent);
    }
}

TEST(Zeta, ZeroAtomBoundsDomainBelow) {
    const auto ens = IncrementEnsemble::atomic(0.1, {0.0, 1.0, 2.0}, {0.2, 0.4, 0.4});
    const auto prof = zeta(moments(ens, arange(-1.0, 3.0, 0.5)));
    EXPECT_NEAR(prof.p_grid.front(), 0.5, 1e-12);
    EXPECT_FALSE(prof.p_min_infinite);
    const auto ends = classify_endpoints(prof);
    bool saw_min = false;
    for (const auto& e : ends)
        if (e.end == End::min) {
            saw_min = true;
            EXPECT_TRUE(e.p_finite);
        }
    EXPECT_TRUE(saw_min);
}

TEST(Zeta, CrossScaleFitRecoversPowerLaw) {
    // <f^p> = ell^{p/3} exactly for f = ell^{1/3}.
    std::vector<MomentTable> tabs;
    const auto grid = arange(1.0, 4.0, 1.0);
    for (double ell : {0.01, 0.02, 0.05}) {
        const auto ens = IncrementEnsemble::uniform(ell, {std::cbrt(ell)});
        tabs.push_back(moments(ens, grid));
    }
    const auto fit = cross_scale_zeta(tabs);
    for (std::size_t i = 0; i < fit.p_grid.size(); ++i) EXPECT_NEAR(fit.zeta[i], fit.p_grid[i] / 3.0, 1e-12);
}

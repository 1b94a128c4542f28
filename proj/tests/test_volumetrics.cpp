#include <multifrac/volumetrics.hpp>

#include "test_support.hpp"

#include <cmath>

using namespace multifrac;

namespace {
MomentTable two_atom_table() { return moments(mft::two_atoms(), arange(-3.0, 5.0, 0.5)); }
}  // namespace

TEST(Volumetrics, TwoAtomOracle) {
    const auto tab = two_atom_table();
    EXPECT_NEAR(dimension_p(tab, 2.0), 2.8072552429782425, 1e-12);
    EXPECT_NEAR(active_volume(tab, 2.0), 0.824692444233059, 1e-12);
    EXPECT_NEAR(threshold_p(tab, 2.0), 1.7411011265922482, 1e-12);
    EXPECT_NEAR(dimension_p(tab, -1.5), 2.8811651892773376, 1e-12);
    EXPECT_NEAR(threshold_p(tab, 0.5), 1.5008569089859272, 1e-12);
    EXPECT_NEAR(dimension(tab, 4.0, 1.0), 2.827264756312129, 1e-12);
    EXPECT_NEAR(threshold(tab, 4.0, 1.0), 1.7828270804131212, 1e-12);
}

TEST(Volumetrics, ThresholdIdentity) {
    const auto tab = two_atom_table();
    for (double p : {-2.0, 0.5, 1.0, 3.0}) {
        const double lhs = std::pow(threshold_p(tab, p), p) * active_volume(tab, p);
        EXPECT_NEAR(lhs / tab.moments[tab.index_of(p)], 1.0, 1e-12);
    }
}

TEST(Volumetrics, SymmetricInQP) {
    const auto tab = two_atom_table();
    EXPECT_NEAR(volume_factor(tab, 3.0, 1.0), volume_factor(tab, 1.0, 3.0), 1e-14);
    EXPECT_NEAR(dimension(tab, -2.0, 2.5), dimension(tab, 2.5, -2.0), 1e-12);
}

TEST(Volumetrics, ConstantMagnitudeFillsSpace) {
    const auto ens = IncrementEnsemble::uniform(0.05, std::vector<double>(7, 2.0));
    const auto tab = moments(ens, arange(-1.0, 3.0, 1.0));
    for (double p : {-1.0, 1.0, 3.0}) {
        EXPECT_NEAR(active_volume(tab, p), 1.0, 1e-13);
        EXPECT_NEAR(dimension_p(tab, p), 3.0, 1e-12);
        EXPECT_NEAR(threshold_p(tab, p), 2.0, 1e-13);
    }
}

TEST(Volumetrics, IndicatorEnsembleMeasuresSupport) {
    // A field that equals U0 on a set of measure m: V_p = m for every p > 0.
    const auto ens = IncrementEnsemble::atomic(0.01, {0.0, 0.7}, {0.9, 0.1});
    const auto tab = moments(ens, arange(0.5, 4.0, 0.5));
    for (double p : {0.5, 2.0, 4.0}) {
        EXPECT_NEAR(active_volume(tab, p), 0.1, 1e-13);
        EXPECT_NEAR(dimension_p(tab, p), 2.5, 1e-12);
        EXPECT_NEAR(threshold_p(tab, p), 0.7, 1e-13);
    }
}

TEST(Volumetrics, PropertySweeps) {
    std::mt19937_64 rng(5);
    const auto grid = arange(-2.0, 4.0, 0.5);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int trial = 0; trial < 60; ++trial) {
        const auto ens = mft::random_atoms(rng);
        const double lambda = u(rng);
        for (const auto& pc : volume_properties(ens, grid, lambda)) EXPECT_TRUE(pc.pass()) << pc.name;
        for (const auto& pc : threshold_properties(ens, grid, lambda)) EXPECT_TRUE(pc.pass()) << pc.name;
    }
}

TEST(Volumetrics, DiagonalProbeConverges) {
    const auto probe = diagonal_limit_probe(mft::two_atoms(), 2.0);
    EXPECT_LT(probe.rel_error, 1e-6);
    EXPECT_NEAR(probe.active_volume, 0.824692444233059, 1e-12);
}

TEST(Volumetrics, ReportFlatnessOfTwoAtoms) {
    // <f^4>/<f^2>^2 = 8.5 / 2.5^2.
    const auto rep = volumetric_report(two_atom_table());
    EXPECT_NEAR(rep.flatness, 8.5 / 6.25, 1e-12);
}

TEST(Volumetrics, ReconstructionRecoversZeta) {
    const auto tab = moments(mft::two_atoms(), arange(-3.0, 5.0, 0.01));
    const auto prof = zeta(tab);
    const auto curve = dimension_curve(prof);
    for (double p : {-2.0, 1.0, 3.0}) {
        const auto est = reconstruct_zeta(curve, prof.zeta1_at_zero(), p);
        EXPECT_NEAR(est.value, prof.zeta[prof.index_of(p)], 1e-5) << p;
    }
    const auto dqp = reconstruct_Dqp(curve, 4.0, 1.0);
    EXPECT_NEAR(dqp.value, 2.827264756312129, 1e-5);
}

TEST(Volumetrics, MissingOrderIsDomainError) {
    const auto tab = two_atom_table();
    EXPECT_MF_ERROR(active_volume(tab, 0.3), ErrorKind::domain);
}

#include <multifrac/concentration.hpp>

#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace multifrac;

TEST(Concentration, ConstantValues) {
    EXPECT_NEAR(concentration_constant(2.0, 1.0), 0.5, 1e-15);
    EXPECT_NEAR(concentration_constant(3.0, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(concentration_constant(4.0, 1.0), std::pow(0.75, 0.75) * std::pow(0.25, 0.25), 1e-15);
    EXPECT_MF_ERROR(concentration_constant(1.0, 2.0), ErrorKind::argument);
    // Brute-force maximum of x + x ln(1 - x) at H0 = 1.
    EXPECT_NEAR(strong_constant(1.0), 0.19934630305731088, 1e-10);
}

TEST(Concentration, DensityValidation) {
    EXPECT_NO_THROW(Density({0.5, 1.5}, {0.5, 0.5}));
    EXPECT_MF_ERROR(Density({0.5, 1.0}, {0.5, 0.5}), ErrorKind::argument);
    const auto d = Density::normalized({1.0, 3.0}, {2.0, 2.0});
    EXPECT_NEAR(d.mean(), 1.0, 1e-15);
}

TEST(Concentration, EntropyOfTwoAtoms) {
    // F = f^2/<f^2> on {1, 2}: values 0.4, 1.6.
    const auto F = Density::from_ensemble(mft::two_atoms(), 2.0);
    const auto e = entropy(F);
    const double H = 0.5 * (0.4 * std::log(0.4) + 1.6 * std::log(1.6));
    EXPECT_NEAR(e.H, H, 1e-14);
    EXPECT_NEAR(e.V, 0.824692444233059, 1e-12);
    EXPECT_NEAR(e.shannon, std::pow(e.V, 2.0 / 3.0) / (2.0 * std::numbers::pi * std::numbers::e), 1e-15);
}

TEST(Concentration, LemmasHoldOnRandomEnsembles) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto ens = mft::random_atoms(rng);
        for (double p : {0.5, 2.0, 4.0}) {
            const auto F = Density::from_ensemble(ens, p);
            EXPECT_TRUE(csiszar_kullback_check(F).pass);
            for (double eps : {0.1, 0.5, 0.9}) EXPECT_TRUE(weak_concentration(F, eps).pass);
            EXPECT_TRUE(strong_concentration(F, std::max(entropy(F).H, 1e-3) * 1.5).pass);
            EXPECT_TRUE(active_region(ens, p, 0.5, 2.0).pass);
            const auto cs = concentration_set(ens, p + 1.0, p);
            EXPECT_TRUE(cs.pass);
            EXPECT_NEAR(cs.set_measure, cs.target_measure, 1e-12);
            EXPECT_TRUE(active_region_qp(ens, p + 1.0, p).pass());
        }
        EXPECT_TRUE(active_region_qp(ens, 1.0, -1.0).pass());
    }
}

TEST(Concentration, StrongRequiresEntropyBound) {
    const auto F = Density::from_ensemble(mft::two_atoms(), 2.0);
    EXPECT_MF_ERROR(strong_concentration(F, 1e-6), ErrorKind::precondition);
}

TEST(Concentration, SupportSetIsCaptured) {
    // Indicator-like ensemble: everything lives on the 10% atom.
    const auto ens = IncrementEnsemble::atomic(0.01, {0.0, 0.7}, {0.9, 0.1});
    const auto cs = concentration_set(ens, 3.0, 1.0);
    EXPECT_NEAR(cs.set_measure, 0.1, 1e-13);
    EXPECT_NEAR(cs.captured_fraction, 1.0, 1e-13);
}

TEST(Concentration, DyadicFamily) {
    const auto r = dyadic_counterexample(4);
    EXPECT_NEAR(r.normalization, 1.0, 1e-15);
    EXPECT_NEAR(r.H, 0.34657359027997264, 1e-14);
    EXPECT_NEAR(r.H, r.H_exact, 1e-13);
    // Entropy grows like (n ln 2)/2 while the rough estimate doubles it.
    const auto big = dyadic_counterexample(64);
    EXPECT_NEAR(big.H, 32.5 * std::numbers::ln2 - std::log(64.0), 1e-10);
    EXPECT_GT(big.H_rough, big.H);
    EXPECT_MF_ERROR(dyadic_counterexample(1), ErrorKind::argument);
}

TEST(Concentration, LogConcentrationHolds) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto ens = mft::random_atoms(rng);
        for (double c : {0.25, 0.5, 0.75}) EXPECT_TRUE(log_concentration(ens, 2.0, 1.0, c).pass);
    }
}

#include <multifrac/generators.hpp>
#include <multifrac/spectrum.hpp>

#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace multifrac;

namespace {
CorrelationCurve gaussian_correlation() {
    auto ell = logspace(1e-6, 6.0, 3000);
    ell.insert(ell.begin(), 0.0);
    std::vector<double> gamma;
    for (double x : ell) gamma.push_back(std::exp(-x * x));
    return correlation_from_gamma(ell, gamma, 1.0);
}
}  // namespace

TEST(Spectrum, GaussianPairPointValue) {
    const std::vector<double> kappa{2.0, 5.0};
    const auto spec = spectrum_from_correlation(gaussian_correlation(), kappa);
    EXPECT_NEAR(spec.E[0], 0.4151074974205948, 1e-7);
    EXPECT_NEAR(spec.E[1], 25.0 * std::exp(-6.25) / (2.0 * std::sqrt(std::numbers::pi)), 1e-7);
}

TEST(Spectrum, S2AndGammaRoutesAgree) {
    auto ell = logspace(1e-6, 6.0, 2000);
    ell.insert(ell.begin(), 0.0);
    std::vector<double> s2, gamma;
    for (double x : ell) {
        gamma.push_back(std::exp(-x * x));
        s2.push_back(1.0 - gamma.back());
    }
    const auto a = correlation_from_gamma(ell, gamma, 1.0);
    const auto b = correlation_from_s2(ell, s2, 1.0);
    for (std::size_t i = 0; i < ell.size(); i += 97) EXPECT_NEAR(a.gamma[i], b.gamma[i], 1e-14);
}

TEST(Spectrum, InconsistentS2Rejected) {
    const std::vector<double> ell{0.0, 0.1, 0.2}, s2{0.0, 2.5, 1.0};  // S2 <= 2 E
    EXPECT_MF_ERROR(correlation_from_s2(ell, s2, 1.0), ErrorKind::inconsistent_input);
}

TEST(Spectrum, SlopeFitExactPowerLaw) {
    const auto x = logspace(1.0, 100.0, 30);
    std::vector<double> y;
    for (double v : x) y.push_back(2.0 * std::pow(v, -5.0 / 3.0));
    const auto fit = slope_fit(x, y, 2.0, 50.0);
    EXPECT_NEAR(fit.exponent, -5.0 / 3.0, 1e-12);
    EXPECT_NEAR(fit.prefactor, 2.0, 1e-11);
    EXPECT_TRUE(fit.power_law);
}

TEST(Spectrum, ConversePowerLaw) {
    SpectrumCurve pl;
    pl.kappa = logspace(1.0, 1000.0, 200);
    for (double k : pl.kappa) pl.E.push_back(0.5 * std::pow(k, -5.0 / 3.0));
    const auto ls = logspace(1e-6, 1e-4, 20);
    const auto s2 = s2_from_spectrum(pl, ls);
    EXPECT_NEAR(slope_fit(s2.ell, s2.s2, 1e-6, 1e-4).exponent, 2.0 / 3.0, 0.02);
}

TEST(Spectrum, SincTailMatchesNumeric) {
    // Integral of x^-b (1 - sin x / x) from a to infinity, b = 2.5, a = 3, by a long trapezoid.
    const double b = 2.5, a = 3.0;
    const auto x = logspace(a, 1e6, 400000);
    std::vector<double> y;
    for (double v : x) y.push_back(std::pow(v, -b) * one_minus_sinc(v));
    const double tail = std::pow(1e6, 1.0 - b) / (b - 1.0);
    EXPECT_NEAR(sinc_tail_integral(b, a), trapezoid(x, y).value + tail, 1e-8);
}

TEST(Spectrum, FieldParseval) {
    RademacherSpec spec;
    spec.dims = 3;
    spec.n = 16;
    spec.modes = band_limited_modes(3, 3, 1.0, 4.0, -11.0 / 6.0, 5);
    const auto field = gen_rademacher_member(spec, 0);
    const auto E = spectrum_from_field(field);
    double shells = 0.0, direct = 0.0;
    for (double e : E.E) shells += e * 2.0 * std::numbers::pi;
    for (double v : field.values()) direct += 0.5 * v * v;
    direct /= double(field.nodes());
    EXPECT_NEAR(shells, direct, 1e-12 * direct);
}

TEST(Spectrum, OneMinusSincSmallArgument) {
    EXPECT_NEAR(one_minus_sinc(1e-6), 1e-12 / 6.0 - 1e-24 / 120.0, 1e-26);
    EXPECT_NEAR(one_minus_sinc(2.0), 1.0 - std::sin(2.0) / 2.0, 1e-15);
}

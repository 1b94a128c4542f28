#include <multifrac/generators.hpp>
#include <multifrac/scaling.hpp>
#include <multifrac/volumetrics.hpp>

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

using namespace multifrac;

TEST(Generators, MonoFractalBetaModel1D) {
    MonoFractalSpec spec;
    spec.dims = 1;
    spec.n = 256;
    spec.ell = 1.0 / 16;
    spec.D = 2.5;
    spec.seed = 9;
    Placement pl;
    const auto field = gen_monofractal(spec, &pl);
    EXPECT_EQ(pl.cells_per_cube, 16u);
    ASSERT_EQ(pl.cubes_per_family.size(), 1u);
    EXPECT_EQ(pl.cubes_per_family[0], 2u);
    const auto dirs = axis_directions(1);
    const auto tab = moments(increments(field, spec.ell, dirs), arange(1.0, 4.0, 0.5));
    const auto prof = zeta(tab);
    for (double p : {1.0, 2.0, 3.0}) {
        EXPECT_NEAR(prof.zeta[prof.index_of(p)], ref_beta_zeta(p, 2.5), 1e-12);
        EXPECT_NEAR(dimension_p(tab, p), 2.5, 1e-12);
        EXPECT_NEAR(threshold_p(tab, p), spec.amplitude(), 1e-12);
    }
}

TEST(Generators, AmplitudeConventions) {
    MonoFractalSpec s;
    s.ell = 1.0 / 64;
    s.D = 2.5;
    EXPECT_NEAR(s.amplitude(), std::pow(1.0 / 64, 1.0 / 6.0), 1e-15);
    s.epsilon = 8.0;
    EXPECT_NEAR(s.amplitude(), 2.0 * std::pow(1.0 / 64, 1.0 / 6.0), 1e-15);
    s.epsilon.reset();
    s.U0 = 0.3;
    EXPECT_EQ(s.amplitude(), 0.3);
}

TEST(Generators, SameSeedSameField) {
    MonoFractalSpec spec;
    spec.dims = 3;
    spec.n = 32;
    spec.ell = 1.0 / 16;
    const auto a = gen_monofractal(spec), b = gen_monofractal(spec);
    EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    spec.seed = 2;
    const auto c = gen_monofractal(spec);
    EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
}

TEST(Generators, CapacityExceededThrows) {
    MonoFractalSpec spec;
    spec.dims = 1;
    spec.n = 64;
    spec.ell = 1.0 / 8;
    spec.D = 2.0;  // needs ell^{-1}/2 = 4 cubes, only 4 slots: fine
    EXPECT_NO_THROW(gen_monofractal(spec));
    spec.D = 1.5;  // ell^{1.5 - 1} ... 11 cubes in 4 slots
    EXPECT_MF_ERROR(gen_monofractal(spec), ErrorKind::capacity);
}

TEST(Generators, KFamilyReference) {
    const std::vector<KNode> nodes{{0.095, 2.2}, {0.22, 2.7}, {0.42, 2.9}};
    auto kinks = ref_kfamily_kinks(nodes);
    std::sort(kinks.begin(), kinks.end());
    ASSERT_EQ(kinks.size(), 2u);
    EXPECT_NEAR(kinks[0], 1.0, 1e-12);
    EXPECT_NEAR(kinks[1], 4.0, 1e-12);
    // Minimum of the three affine pieces 3 - dim + h p.
    for (double p : {0.5, 2.0, 6.0}) {
        double m = 1e300;
        for (const auto& n : nodes) m = std::min(m, 3.0 - n.dim + n.h * p);
        EXPECT_NEAR(ref_kfamily_zeta(p, nodes), m, 1e-14);
    }
}

TEST(Generators, RandomReferenceValues) {
    EXPECT_NEAR(ref_khintchine_B(2.0), 1.0, 1e-14);
    EXPECT_NEAR(ref_khintchine_B(4.0), 3.0, 1e-13);
    EXPECT_NEAR(ref_khintchine_B(6.0), 15.0, 1e-12);
    const double ell = 1.0 / 64;
    const auto b = ref_random_bounds(3.0, ell);
    EXPECT_LT(b.lower, b.upper);
    // Derivative helpers against central differences.
    const double h = 1e-5;
    const double d1 = (ref_random_bounds(3.0 + h, ell).lower - ref_random_bounds(3.0 - h, ell).lower) / (2 * h);
    EXPECT_NEAR(ref_random_lower_zeta1(3.0, ell), d1, 1e-8);
    const double d2 = (ref_random_lower_zeta1(3.0 + h, ell) - ref_random_lower_zeta1(3.0 - h, ell)) / (2 * h);
    EXPECT_NEAR(ref_random_lower_zeta2(3.0, ell), d2, 1e-7);
}

namespace {
RademacherSpec small_rademacher(std::size_t members) {
    RademacherSpec spec;
    spec.dims = 3;
    spec.n = 16;
    spec.components = 3;
    spec.members = members;
    spec.seed = 4;
    spec.modes = band_limited_modes(3, 3, 1.0, 3.0, -11.0 / 6.0, 77);
    return spec;
}
}  // namespace

TEST(Generators, RademacherParseval) {
    const auto spec = small_rademacher(1);
    const auto field = gen_rademacher_member(spec, 0);
    double energy = 0.0;
    for (double v : field.values()) energy += v * v;
    energy /= double(field.nodes());
    double modes = 0.0;
    for (const auto& m : spec.modes)
        for (const auto& c : m.u) modes += std::norm(c);
    EXPECT_NEAR(energy, modes, 1e-12 * modes);
}

TEST(Generators, RademacherMembersDiffer) {
    const auto spec = small_rademacher(2);
    const auto all = gen_rademacher(spec);
    ASSERT_EQ(all.size(), 2u);
    const auto again = gen_rademacher_member(spec, 1);
    EXPECT_TRUE(std::equal(all[1].values().begin(), all[1].values().end(), again.values().begin()));
    EXPECT_FALSE(std::equal(all[0].values().begin(), all[0].values().end(), all[1].values().begin()));
}

TEST(Generators, RademacherRejectsNonHermitian) {
    auto spec = small_rademacher(1);
    spec.modes.pop_back();
    EXPECT_MF_ERROR(gen_rademacher_member(spec, 0), ErrorKind::argument);
}

TEST(SpecFile, ParsesMonofractal) {
    const auto parsed = parse_generator_spec("# c\nkind = monofractal\ndims = 1\nn = 128\nell = 2^-4\nD = 5/2\nseed=3\n");
    const auto& s = std::get<MonoFractalSpec>(parsed.spec);
    EXPECT_EQ(s.dims, 1);
    EXPECT_EQ(s.n, 128u);
    EXPECT_DOUBLE_EQ(s.ell, 0.0625);
    EXPECT_DOUBLE_EQ(s.D, 2.5);
    EXPECT_EQ(s.seed, 3u);
    EXPECT_EQ(parsed.entries.size(), 6u);
}

TEST(SpecFile, ParsesMultifractalNodes) {
    const auto parsed = parse_generator_spec("kind = multifractal\nnode = 0.1 2.2\nnode = 0.3 2.8\n");
    const auto& s = std::get<MultiFractalSpec>(parsed.spec);
    ASSERT_EQ(s.nodes.size(), 2u);
    EXPECT_DOUBLE_EQ(s.nodes[1].dim, 2.8);
}

TEST(SpecFile, RejectsBadLines) {
    EXPECT_MF_ERROR(parse_generator_spec("kind = monofractal\nwhat = 1\n"), ErrorKind::argument);
    EXPECT_MF_ERROR(parse_generator_spec("kind = monofractal\nD = 2\nD = 2.5\n"), ErrorKind::argument);
    EXPECT_MF_ERROR(parse_generator_spec("kind = monofractal\nU0 = 1\nepsilon = 1\n"), ErrorKind::argument);
    EXPECT_MF_ERROR(parse_generator_spec("kind = sphere\n"), ErrorKind::argument);
    EXPECT_MF_ERROR(parse_generator_spec("kind = monofractal\nell = abc\n"), ErrorKind::argument);
}

TEST(SpecFile, IntegerPowers) {
    const auto parsed = parse_generator_spec("kind = multifractal\ndims = 1\nn = 2^20\nell = 2^-20\nnode = 0.1 2.5\n");
    EXPECT_EQ(std::get<MultiFractalSpec>(parsed.spec).n, std::size_t{1} << 20);
    EXPECT_MF_ERROR(parse_generator_spec("kind = monofractal\nn = 2^70\n"), ErrorKind::argument);
}

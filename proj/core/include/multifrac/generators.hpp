#pragma once

#include "multifrac/ensemble.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace multifrac {

// Cubes of side ell carrying |u| = U0 in random directions, zero elsewhere. The
// cube count is chosen so the increment-active measure (cube plus shifted image)
// equals ell^{3-D}: N = round(ell^{3-D} / (2 ell^dims)).
struct MonoFractalSpec {
    int dims = 3;
    std::size_t n = 64;
    double ell = 1.0 / 64;
    double D = 2.5;
    std::optional<double> U0;
    std::optional<double> epsilon;  // U0 = epsilon^{1/3} ell^{(D-2)/3}
    std::uint64_t seed = 1;

    double amplitude() const;
};

struct KNode {
    double h;
    double dim;
};

struct MultiFractalSpec {
    int dims = 3;
    std::size_t n = 64;
    double ell = 1.0 / 64;
    std::vector<KNode> nodes;  // h and dim increasing
    std::uint64_t seed = 1;
};

struct FourierMode {
    std::array<int, 3> k{0, 0, 0};
    std::array<std::complex<double>, 3> u{};
};

struct RademacherSpec {
    int dims = 3;
    std::size_t n = 64;
    std::size_t components = 3;
    // Full Hermitian set: u_{-k} = conj(u_k), no k = 0 entry.
    std::vector<FourierMode> modes;
    std::uint64_t seed = 1;
    std::size_t members = 1;
};

struct Placement {
    std::size_t cells_per_cube = 0;
    std::size_t slots = 0;                   // admissible cube positions
    std::vector<std::size_t> cubes_per_family;
    double effective_ell = 0.0;              // cells_per_cube / n
};

GridField gen_monofractal(const MonoFractalSpec& spec, Placement* placement = nullptr);
GridField gen_multifractal(const MultiFractalSpec& spec, Placement* placement = nullptr);
std::vector<GridField> gen_rademacher(const RademacherSpec& spec);
// One ensemble member; member m uses signs seeded from (seed, m).
GridField gen_rademacher_member(const RademacherSpec& spec, std::size_t member);

// Hermitian amplitudes on 1 <= |k| <= k_max (integer shells) with
// |u_k| proportional to |k|^{slope}; random phases and directions from seed.
std::vector<FourierMode> band_limited_modes(int dims, std::size_t components, double k_min, double k_max,
                                            double slope, std::uint64_t seed);

// Reference curves.
double ref_beta_zeta(double p, double D);            // 3 - D + p (D - 2)/3
double ref_beta_relation(double p, double D_p3);     // p/3 + (3 - D_{p,3})(1 - p/3)
double ref_kfamily_zeta(double p, std::span<const KNode> nodes);
// Nodal p where consecutive affine pieces cross.
std::vector<double> ref_kfamily_kinks(std::span<const KNode> nodes);

struct RandomBounds {
    double lower;
    double upper;
};
RandomBounds ref_random_bounds(double p, double ell);
double ref_khintchine_B(double p);
double ref_random_Dp(double p, double ell);
// First and second p-derivatives of the lower bound, for profile construction.
double ref_random_lower_zeta1(double p, double ell);
double ref_random_lower_zeta2(double p, double ell);

// Generator spec files: flat `key = value` lines, `#` comments. See README.
using GeneratorSpec = std::variant<MonoFractalSpec, MultiFractalSpec, RademacherSpec>;

struct ParsedSpec {
    GeneratorSpec spec;
    std::vector<std::pair<std::string, std::string>> entries;  // echo, in file order
};
ParsedSpec parse_generator_spec(const std::string& text);

}  // namespace multifrac

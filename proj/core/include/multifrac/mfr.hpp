#pragma once

#include "multifrac/ensemble.hpp"
#include "multifrac/scaling.hpp"
#include "multifrac/volumetrics.hpp"

#include <span>
#include <vector>

namespace multifrac {

struct MfrSpectrum {
    std::vector<double> h_grid;
    std::vector<double> d;
    std::vector<double> argmin_p;
    std::vector<bool> outside;  // h outside [h_min, h_max] of the profile
    double h_min = 0.0;
    double h_max = 0.0;
    double peak_h = 0.0;  // zeta'(0) when 0 is on the grid, else the argmax of d
    double peak_d = 0.0;

    std::size_t size() const noexcept { return h_grid.size(); }
};

// d_h = min over the profile grid of 3 + h p - zeta_p; ties go to the smaller |p|.
MfrSpectrum legendre(const ScalingProfile& prof, std::span<const double> h_grid);

// zeta_p = min over the spectrum grid of 3 + p h - d_h.
std::vector<double> inverse_legendre(const MfrSpectrum& spec, std::span<const double> p_grid);

// Parametric spectrum {(zeta'_p, D_p)}; throws internal-consistency if it departs
// from legendre() at the same h by more than tol.
struct ParametricSpectrum {
    std::vector<double> p;
    std::vector<double> h;
    std::vector<double> d;
    double max_deviation = 0.0;  // against legendre()
};
ParametricSpectrum dh_from_Dp(std::span<const double> D_p, const ScalingProfile& prof, double tol = 1e-6);

struct ActiveRegionBound {
    double h = 0.0;
    double measure = 0.0;    // mu(A_h)
    double d_h = 0.0;
    double p_star = 0.0;
    double constant = 0.0;   // c^{-p*} for p* >= 0, C^{-p*} otherwise
    double bound = 0.0;      // constant * ell^{3 - d_h}
    bool pass = true;
};
ActiveRegionBound active_region_bound_check(const IncrementEnsemble& ens, const ScalingProfile& prof,
                                            double h, double c, double C);

// h_max - h_min against the integral of (3 - D_s)/s^2 over the profile grid.
// On a finite grid [a, b] the integral equals zeta_a/a - zeta_b/b exactly; the
// width follows by adding the tails zeta_b/b - h_min and h_max - zeta_a/a, with
// the limits taken from the profile when known.
struct WidthCheck {
    double width = 0.0;
    double integral = 0.0;
    double tails = 0.0;
    double quadrature_error = 0.0;
    double residual = 0.0;        // |width - integral - tails|
    double truncation_gap = 0.0;  // |width - integral|
    bool pass = false;
};
WidthCheck spectrum_width_check(const ScalingProfile& prof, double slack = 1e-9);

}  // namespace multifrac

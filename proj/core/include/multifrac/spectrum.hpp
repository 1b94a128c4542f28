#pragma once

#include "multifrac/ensemble.hpp"

#include <optional>
#include <span>
#include <vector>

namespace multifrac {

// Gamma(l) = E - S2(l) sampled on a grid starting at or near l = 0. Beyond
// the grid, Gamma is continued by tail_constant * (1 + l)^{-4}.
struct CorrelationCurve {
    std::vector<double> ell;
    std::vector<double> gamma;
    double energy = 0.0;          // Gamma(0)
    double tail_constant = 0.0;
    // Relative |Gamma(l_max)| / energy above which the tail counts as non-decaying.
    double decay_threshold = 1e-2;

    double ell_max() const { return ell.back(); }
};

// Throws inconsistent_input if some S2 > 2 E, argument error if S2 < 0.
CorrelationCurve correlation_from_s2(std::span<const double> ell, std::span<const double> s2, double energy);
CorrelationCurve correlation_from_gamma(std::span<const double> ell, std::span<const double> gamma, double energy);

struct FitResult {
    double exponent = 0.0;
    double prefactor = 0.0;
    double residual = 0.0;  // RMS deviation in log space
    double lo = 0.0;
    double hi = 0.0;
    std::size_t points = 0;
    bool power_law = false;  // residual <= 0.05
};

// Least squares of ln y on ln x over lo <= x <= hi. Needs >= 5 points, y > 0.
FitResult slope_fit(std::span<const double> x, std::span<const double> y, double lo, double hi);

struct SpectrumCurve {
    std::vector<double> kappa;
    std::vector<double> E;
    std::optional<FitResult> fit;
    double negative_noise = 0.0;  // max(0, -min E)
};

// E(kappa) = (2/pi) kappa int_0^inf l sin(kappa l) Gamma(l) dl, normalized so that
// int E dkappa = Gamma(0).
SpectrumCurve spectrum_from_correlation(const CorrelationCurve& corr, std::span<const double> kappa);

// Shell spectrum of a periodic field on the unit box; kappa = 2 pi |k|.
// shell_width in kappa units (default 2 pi: one integer shell). The fit
// band defaults to |k| in [8, 80] * (n/2) / 128.
SpectrumCurve spectrum_from_field(const GridField& field, double shell_width = 0.0,
                                  std::optional<std::pair<double, double>> fit_band = std::nullopt);

struct StructureCurve {
    std::vector<double> ell;
    std::vector<double> s2;
    std::optional<FitResult> fit;
    std::optional<double> tail_exponent;  // beta of the kappa^{-beta} continuation
};

// S2(l) = int E(kappa) (1 - sin(kappa l)/(kappa l)) dkappa. E is interpolated
// log-log on its grid, taken as zero below it, and continued above it by a
// power law fitted to the last points (convergence error if that law is not
// integrable). Set extrapolate = false to take E = 0 above the grid.
StructureCurve s2_from_spectrum(const SpectrumCurve& spec, std::span<const double> ell, bool extrapolate = true);

// Exact direction-averaged S2 of a periodic field (1/4 <|du|^2> convention),
// summed over Fourier modes.
std::vector<double> s2_haar_from_field(const GridField& field, std::span<const double> ell);

// 1 - sin(x)/x without cancellation near 0.
double one_minus_sinc(double x) noexcept;
// int_a^inf x^{-beta} (1 - sinc x) dx for 1 < beta < 3.
double sinc_tail_integral(double beta, double a);

}  // namespace multifrac

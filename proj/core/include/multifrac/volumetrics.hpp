#pragma once

#include "multifrac/ensemble.hpp"
#include "multifrac/scaling.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace multifrac {

// Agreement required between the log-domain and linear-domain evaluations.
inline constexpr double consistency_tol = 1e-9;

double log_volume_factor(const MomentTable& tab, double q, double p);
double volume_factor(const MomentTable& tab, double q, double p);
// 3 - log_ell V_{q,p}; cross-checked against the exponent form.
double dimension(const MomentTable& tab, double q, double p);

double log_active_volume(const MomentTable& tab, double p);
double active_volume(const MomentTable& tab, double p);
// 3 - log_ell V_p; cross-checked against 3 - zeta_p + p zeta'_p.
double dimension_p(const MomentTable& tab, double p);

double threshold(const MomentTable& tab, double q, double p);
double threshold_p(const MomentTable& tab, double p);

// Direct witness of V_{q,p} -> V_p: moments at p +- delta taken from the ensemble.
struct DiagonalProbe {
    double active_volume = 0.0;
    double upper = 0.0;        // V_{p+delta, p}
    double lower = 0.0;        // V_{p-delta, p}
    double richardson = 0.0;   // symmetric average
    double rel_error = 0.0;
};
DiagonalProbe diagonal_limit_probe(const IncrementEnsemble& ens, double p, double delta = 1e-4);

struct Estimate {
    double value = 0.0;
    double error = 0.0;     // quadrature error estimate
    bool extended = false;  // integrated through s = 0 across signs
};

// exp of the mean of ln s_r over [p, q], trapezoid on the r-grid.
Estimate restore_threshold(std::span<const double> r_grid, std::span<const double> s_values,
                           double q, double p);

// D_s sampled on an s-grid. zeta2_at_zero supplies the removable-singularity
// value; when absent it is extrapolated from the nearest samples.
struct DimensionCurve {
    std::vector<double> s;
    std::vector<double> D;
    std::optional<double> zeta2_at_zero;
};

DimensionCurve dimension_curve(const ScalingProfile& prof);

Estimate intermittency_correction(const DimensionCurve& curve, double p);
Estimate reconstruct_zeta(const DimensionCurve& curve, double zeta1_at_zero, double p);
Estimate reconstruct_Dqp(const DimensionCurve& curve, double q, double p);

struct VolumetricReport {
    double ell = 0.0;
    std::vector<double> p_grid;
    // Row-major over (q, p); the diagonal carries the q -> p limits.
    std::vector<double> V_qp;
    std::vector<double> D_qp;
    std::vector<double> s_qp;
    std::vector<double> V_p;
    std::vector<double> D_p;
    std::vector<double> s_p;
    std::vector<double> I_p;  // NaN when 0 is outside the domain
    double flatness = 0.0;    // 1 / V_{4,2}; NaN when 2 or 4 is missing
    double consistency_tol = multifrac::consistency_tol;
    double probe_tol = 1e-6;
};

VolumetricReport volumetric_report(const MomentTable& tab);

struct PropertyCheck {
    std::string name;
    std::size_t evaluations = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;  // most negative slack seen (>= -tol passes)
    bool pass() const noexcept { return violations == 0; }
    void record(double margin, double tol);
};

// Properties V1-V6 and the dimension convexity inequalities on all grid pairs
// and triples; lambda is the rescaling used for the homogeneity checks.
std::vector<PropertyCheck> volume_properties(const IncrementEnsemble& ens, std::span<const double> p_grid,
                                             double lambda, double tol = 1e-9);
// Properties s1-s7.
std::vector<PropertyCheck> threshold_properties(const IncrementEnsemble& ens, std::span<const double> p_grid,
                                                double lambda, double tol = 1e-9);

}  // namespace multifrac

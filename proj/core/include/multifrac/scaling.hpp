#pragma once

#include "multifrac/ensemble.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace multifrac {

// Per-scale exponents on the effective domain of a moment table.
struct ScalingProfile {
    double ell = 0.0;
    std::vector<double> p_grid;
    std::vector<double> zeta;
    std::vector<double> zeta1;
    std::vector<double> zeta2;
    // Domain bounds; a bound flagged infinite means the grid end is a clip.
    double p_min = 0.0;
    double p_max = 0.0;
    bool p_min_infinite = false;
    bool p_max_infinite = false;
    // Limits of zeta' at the domain ends when they are known beyond the grid
    // (extreme magnitudes of an atomic ensemble, or analytic profiles). May be +-inf.
    std::optional<double> h_min_limit;
    std::optional<double> h_max_limit;

    std::size_t size() const noexcept { return p_grid.size(); }
    // Index of p in the grid (within 1e-9) or throws a domain error.
    std::size_t index_of(double p) const;
    // zeta(0) and its derivatives; throws if 0 is outside the grid.
    double zeta1_at_zero() const;
    double zeta2_at_zero() const;

    struct Bounds {
        double p_min;
        double p_max;
        bool p_min_infinite;
        bool p_max_infinite;
    };
    static ScalingProfile from_curves(double ell, std::vector<double> p_grid, std::vector<double> zeta,
                                      std::vector<double> zeta1, std::vector<double> zeta2,
                                      Bounds bounds, std::optional<double> h_min_limit = {},
                                      std::optional<double> h_max_limit = {});
};

ScalingProfile zeta(const MomentTable& tab);

struct HolderRange {
    double h_min;
    double h_max;
};
HolderRange holder_range(const ScalingProfile& prof);

struct RatioBoundsReport {
    double worst_margin = 0.0;   // min over pairs of the distance inside [h_min, h_max]
    std::size_t pairs = 0;
    std::size_t violations = 0;  // beyond 1e-9
    // |zeta_p/p - h_min| at the largest grid p, when p_max is flagged infinite
    // and the limit is known.
    std::optional<double> limit_gap;
    bool pass = true;
};
RatioBoundsReport ratio_bounds_check(const ScalingProfile& prof, double tol = 1e-9);

enum class End { max, min };

struct EndpointClass {
    End end = End::max;
    int label = 1;  // 1..5
    bool p_finite = true;
    bool h_finite = true;
    bool dprime_finite = true;
    double p_bound = 0.0;
    double h_value = 0.0;    // limit when known, else zeta' at the grid end
    double end_curvature = 0.0;  // zeta'' at the grid end (d-slope trend)
    // Only meaningful for label 5: zeta'' == 0 across the domain and zeta(p) = zeta'(0) p.
    bool k41_consistent = false;
};

std::vector<EndpointClass> classify_endpoints(const ScalingProfile& prof, double tol = 1e-9);

std::string to_string(End end);

// Cross-scale convenience: least-squares slope of ln<f^p> against ln(ell) per p.
// Separate from the per-scale definition used everywhere else.
struct CrossScaleFit {
    std::vector<double> p_grid;
    std::vector<double> zeta;
    std::vector<double> residual;
};
CrossScaleFit cross_scale_zeta(std::span<const MomentTable> tables);

}  // namespace multifrac

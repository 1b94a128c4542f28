#include "multifrac/scaling.hpp"

#include "multifrac/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace multifrac {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

std::size_t ScalingProfile::index_of(double p) const {
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        if (std::abs(p_grid[i] - p) <= 1e-9 * std::max(1.0, std::abs(p))) return i;
    throw Error(ErrorKind::domain, "profile has no grid point p = " + std::to_string(p));
}

double ScalingProfile::zeta1_at_zero() const { return zeta1[index_of(0.0)]; }
double ScalingProfile::zeta2_at_zero() const { return zeta2[index_of(0.0)]; }

ScalingProfile ScalingProfile::from_curves(double ell, std::vector<double> p_grid, std::vector<double> zeta,
                                           std::vector<double> zeta1, std::vector<double> zeta2,
                                           Bounds bounds, std::optional<double> h_min_limit,
                                           std::optional<double> h_max_limit) {
    const std::size_t n = p_grid.size();
    if (n == 0 || zeta.size() != n || zeta1.size() != n || zeta2.size() != n)
        throw Error(ErrorKind::argument, "profile: curve sizes differ or are empty");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(p_grid[i + 1] > p_grid[i])) throw Error(ErrorKind::argument, "profile: p grid not increasing");
    ScalingProfile prof;
    prof.ell = ell;
    prof.p_grid = std::move(p_grid);
    prof.zeta = std::move(zeta);
    prof.zeta1 = std::move(zeta1);
    prof.zeta2 = std::move(zeta2);
    prof.p_min = bounds.p_min;
    prof.p_max = bounds.p_max;
    prof.p_min_infinite = bounds.p_min_infinite;
    prof.p_max_infinite = bounds.p_max_infinite;
    prof.h_min_limit = h_min_limit;
    prof.h_max_limit = h_max_limit;
    return prof;
}

ScalingProfile zeta(const MomentTable& tab) {
    if (!(tab.ell > 0.0) || tab.ell >= 1.0) throw Error(ErrorKind::scale, "zeta: ell must lie in (0, 1)");
    const EffectiveDomain dom = effective_domain(tab);
    if (dom.empty) throw Error(ErrorKind::domain, "zeta: no finite moments on the grid");
    const double ln_ell = std::log(tab.ell);
    ScalingProfile prof;
    prof.ell = tab.ell;
    for (std::size_t i = dom.first; i <= dom.last; ++i) {
        prof.p_grid.push_back(tab.p_grid[i]);
        prof.zeta.push_back(tab.p_grid[i] == 0.0 ? 0.0 : tab.ln_moments[i] / ln_ell);
        prof.zeta1.push_back(tab.mean_log[i] / ln_ell);
        const double var = tab.mean_log2[i] - tab.mean_log[i] * tab.mean_log[i];
        prof.zeta2.push_back(var / ln_ell);
    }
    prof.p_min = dom.p_min;
    prof.p_max = dom.p_max;
    prof.p_min_infinite = dom.p_min_infinite;
    prof.p_max_infinite = dom.p_max_infinite;
    // Extreme Hoelder exponents of a bounded atomic ensemble.
    if (tab.max_magnitude > 0.0) prof.h_min_limit = std::log(tab.max_magnitude) / ln_ell;
    if (tab.zero_fraction > 0.0)
        prof.h_max_limit = inf;
    else if (tab.min_positive_magnitude > 0.0)
        prof.h_max_limit = std::log(tab.min_positive_magnitude) / ln_ell;
    return prof;
}

HolderRange holder_range(const ScalingProfile& prof) {
    if (prof.size() == 0) throw Error(ErrorKind::domain, "holder_range: empty profile");
    return {prof.zeta1.back(), prof.zeta1.front()};
}

RatioBoundsReport ratio_bounds_check(const ScalingProfile& prof, double tol) {
    RatioBoundsReport r;
    if (prof.size() < 2) throw Error(ErrorKind::precondition, "ratio_bounds_check: need >= 2 grid points");
    const auto [h_min, h_max] = holder_range(prof);
    r.worst_margin = inf;
    for (std::size_t i = 0; i < prof.size(); ++i)
        for (std::size_t j = i + 1; j < prof.size(); ++j) {
            const double ratio = (prof.zeta[j] - prof.zeta[i]) / (prof.p_grid[j] - prof.p_grid[i]);
            const double margin = std::min(ratio - h_min, h_max - ratio);
            r.worst_margin = std::min(r.worst_margin, margin);
            ++r.pairs;
            if (margin < -tol) ++r.violations;
        }
    if (prof.p_max_infinite && prof.h_min_limit && std::isfinite(*prof.h_min_limit) && prof.p_grid.back() > 0.0)
        r.limit_gap = std::abs(prof.zeta.back() / prof.p_grid.back() - *prof.h_min_limit);
    r.pass = r.violations == 0;
    return r;
}

std::string to_string(End end) { return end == End::max ? "max" : "min"; }

std::vector<EndpointClass> classify_endpoints(const ScalingProfile& prof, double tol) {
    if (prof.size() == 0) throw Error(ErrorKind::domain, "classify_endpoints: empty profile");
    bool linear = true;
    for (double z2 : prof.zeta2)
        if (std::abs(z2) > tol) linear = false;

    auto make = [&](End end) {
        EndpointClass c;
        c.end = end;
        const bool is_max = end == End::max;
        const std::size_t idx = is_max ? prof.size() - 1 : 0;
        c.p_finite = !(is_max ? prof.p_max_infinite : prof.p_min_infinite);
        c.p_bound = is_max ? prof.p_max : prof.p_min;
        const auto& limit = is_max ? prof.h_min_limit : prof.h_max_limit;
        c.h_value = limit ? *limit : prof.zeta1[idx];
        c.h_finite = std::isfinite(c.h_value);
        c.end_curvature = prof.zeta2[idx];
        // d'_h at the end equals the p where zeta' reaches its limit; it is finite
        // on data only when zeta' has stopped moving, i.e. zeta'' vanishes at the end.
        c.dprime_finite = std::abs(c.end_curvature) <= tol &&
                          (!limit || std::abs(*limit - prof.zeta1[idx]) <= std::sqrt(tol));
        if (c.p_finite)
            c.label = c.h_finite ? 1 : 3;
        else if (!c.h_finite)
            c.label = 2;
        else
            c.label = c.dprime_finite ? 5 : 4;
        if (c.label == 5) {
            bool through_origin = true;
            for (std::size_t i = 0; i < prof.size(); ++i)
                if (std::abs(prof.zeta[i] - prof.zeta1[idx] * prof.p_grid[i]) > std::sqrt(tol))
                    through_origin = false;
            c.k41_consistent = linear && through_origin;
        }
        return c;
    };
    return {make(End::max), make(End::min)};
}

CrossScaleFit cross_scale_zeta(std::span<const MomentTable> tables) {
    if (tables.size() < 2) throw Error(ErrorKind::fit, "cross_scale_zeta: need >= 2 scales");
    CrossScaleFit fit;
    fit.p_grid = tables.front().p_grid;
    for (const auto& t : tables)
        if (t.p_grid != fit.p_grid) throw Error(ErrorKind::argument, "cross_scale_zeta: p grids differ");
    for (std::size_t i = 0; i < fit.p_grid.size(); ++i) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t k = 0;
        for (const auto& t : tables) {
            if (!t.finite(i)) continue;
            const double x = std::log(t.ell), y = t.ln_moments[i];
            sx += x, sy += y, sxx += x * x, sxy += x * y;
            ++k;
        }
        if (k < 2) {
            fit.zeta.push_back(std::nan(""));
            fit.residual.push_back(std::nan(""));
            continue;
        }
        const double kk = static_cast<double>(k);
        const double slope = (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
        const double icpt = (sy - slope * sx) / kk;
        double rss = 0.0;
        for (const auto& t : tables) {
            if (!t.finite(i)) continue;
            const double e = t.ln_moments[i] - (icpt + slope * std::log(t.ell));
            rss += e * e;
        }
        fit.zeta.push_back(slope);
        fit.residual.push_back(std::sqrt(rss / kk));
    }
    return fit;
}

}  // namespace multifrac

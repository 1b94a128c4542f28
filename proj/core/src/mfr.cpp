#include "multifrac/mfr.hpp"

#include "multifrac/error.hpp"
#include "multifrac/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace multifrac {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double tie_tol = 1e-12;
}

MfrSpectrum legendre(const ScalingProfile& prof, std::span<const double> h_grid) {
    if (prof.size() == 0) throw Error(ErrorKind::domain, "legendre: empty profile domain");
    MfrSpectrum s;
    const auto range = holder_range(prof);
    s.h_min = range.h_min;
    s.h_max = range.h_max;
    s.h_grid.assign(h_grid.begin(), h_grid.end());
    s.d.resize(h_grid.size());
    s.argmin_p.resize(h_grid.size());
    s.outside.resize(h_grid.size());
    parallel_for(h_grid.size(), [&](std::size_t j) {
        const double h = h_grid[j];
        double best = inf, best_p = 0.0;
        for (std::size_t i = 0; i < prof.size(); ++i) {
            const double p = prof.p_grid[i];
            const double v = 3.0 + h * p - prof.zeta[i];
            const double scale = tie_tol * std::max(1.0, std::abs(v));
            if (v < best - scale || (std::abs(v - best) <= scale && std::abs(p) < std::abs(best_p))) {
                best = std::min(best, v);
                best_p = p;
            }
        }
        s.d[j] = best;
        s.argmin_p[j] = best_p;
        s.outside[j] = h < s.h_min - 1e-12 || h > s.h_max + 1e-12;
    });
    bool has_zero = false;
    for (std::size_t i = 0; i < prof.size(); ++i)
        if (prof.p_grid[i] == 0.0) {
            has_zero = true;
            s.peak_h = prof.zeta1[i];
        }
    if (has_zero && !s.h_grid.empty()) {
        std::size_t k = 0;
        for (std::size_t j = 1; j < s.size(); ++j)
            if (std::abs(s.h_grid[j] - s.peak_h) < std::abs(s.h_grid[k] - s.peak_h)) k = j;
        s.peak_d = s.d[k];
    } else if (!s.h_grid.empty()) {
        const auto it = std::max_element(s.d.begin(), s.d.end());
        s.peak_d = *it;
        s.peak_h = s.h_grid[static_cast<std::size_t>(it - s.d.begin())];
    }
    return s;
}

std::vector<double> inverse_legendre(const MfrSpectrum& spec, std::span<const double> p_grid) {
    std::vector<double> z(p_grid.size(), inf);
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        for (std::size_t j = 0; j < spec.size(); ++j)
            z[i] = std::min(z[i], 3.0 + p_grid[i] * spec.h_grid[j] - spec.d[j]);
    return z;
}

ParametricSpectrum dh_from_Dp(std::span<const double> D_p, const ScalingProfile& prof, double tol) {
    if (D_p.size() != prof.size()) throw Error(ErrorKind::argument, "dh_from_Dp: D_p and profile grids differ");
    ParametricSpectrum ps;
    ps.p = prof.p_grid;
    ps.h = prof.zeta1;
    ps.d.assign(D_p.begin(), D_p.end());
    const MfrSpectrum ref = legendre(prof, ps.h);
    for (std::size_t i = 0; i < ps.d.size(); ++i)
        ps.max_deviation = std::max(ps.max_deviation, std::abs(ps.d[i] - ref.d[i]));
    if (ps.max_deviation > tol)
        throw Error(ErrorKind::internal_consistency,
                    "parametric spectrum departs from the Legendre transform by " + std::to_string(ps.max_deviation));
    return ps;
}

ActiveRegionBound active_region_bound_check(const IncrementEnsemble& ens, const ScalingProfile& prof,
                                            double h, double c, double C) {
    if (!(c > 0.0 && c < C)) throw Error(ErrorKind::argument, "active_region_bound_check: need 0 < c < C");
    ActiveRegionBound r;
    r.h = h;
    const double lo = c * std::pow(prof.ell, h);
    const double hi = C * std::pow(prof.ell, h);
    CompensatedSum mu;
    for (std::size_t j = 0; j < ens.size(); ++j)
        if (ens.magnitudes[j] >= lo && ens.magnitudes[j] <= hi) mu.add(ens.weights[j]);
    r.measure = mu.value();
    const std::vector<double> hg{h};
    const MfrSpectrum s = legendre(prof, hg);
    r.d_h = s.d[0];
    r.p_star = s.argmin_p[0];
    r.constant = r.p_star >= 0.0 ? std::pow(c, -r.p_star) : std::pow(C, -r.p_star);
    r.bound = r.constant * std::pow(prof.ell, 3.0 - r.d_h);
    r.pass = r.measure <= r.bound * (1.0 + 1e-9);
    return r;
}

WidthCheck spectrum_width_check(const ScalingProfile& prof, double slack) {
    if (prof.size() < 2) throw Error(ErrorKind::domain, "width check: need >= 2 grid points");
    const double a = prof.p_grid.front(), b = prof.p_grid.back();
    if (a == 0.0 || b == 0.0) throw Error(ErrorKind::domain, "width check: grid must not end at p = 0");
    const std::size_t n = prof.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = prof.p_grid[i];
        g[i] = s == 0.0 ? -0.5 * prof.zeta2[i] : (prof.zeta[i] - s * prof.zeta1[i]) / (s * s);
    }
    const QuadResult q = trapezoid(prof.p_grid, g);
    const double h_min = prof.h_min_limit ? *prof.h_min_limit : prof.zeta1.back();
    const double h_max = prof.h_max_limit ? *prof.h_max_limit : prof.zeta1.front();
    WidthCheck w;
    w.width = h_max - h_min;
    w.integral = q.value;
    w.quadrature_error = q.error;
    w.tails = (prof.zeta.back() / b - h_min) + (h_max - prof.zeta.front() / a);
    w.residual = std::abs(w.width - w.integral - w.tails);
    w.truncation_gap = std::abs(w.width - w.integral);
    w.pass = std::isfinite(w.residual) && w.residual <= w.quadrature_error + slack;
    return w;
}

}  // namespace multifrac

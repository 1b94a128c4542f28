#include "multifrac/volumetrics.hpp"

#include "multifrac/error.hpp"
#include "multifrac/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace multifrac {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
const double nan_v = std::numeric_limits<double>::quiet_NaN();

double ln_ell_of(const MomentTable& tab) {
    if (!(tab.ell > 0.0) || tab.ell >= 1.0) throw Error(ErrorKind::scale, "ell must lie in (0, 1)");
    return std::log(tab.ell);
}

double ln_moment(const MomentTable& tab, double p) {
    const std::size_t i = tab.index_of(p);
    if (!std::isfinite(tab.ln_moments[i]))
        throw Error(ErrorKind::domain, "moment of order " + std::to_string(p) + " is not finite");
    return tab.ln_moments[i];
}

// Exponent computed from the plain <f^p> column; NaN when that column overflowed.
double linear_zeta(const MomentTable& tab, std::size_t i, double ln_ell) {
    const double m = tab.moments[i];
    if (!(m > 0.0) || !std::isfinite(m)) return nan_v;
    return std::log(m) / ln_ell;
}

bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

double log_volume_factor(const MomentTable& tab, double q, double p) {
    if (q == p) throw Error(ErrorKind::argument, "volume factor needs q != p (use active_volume)");
    const double lq = ln_moment(tab, q);
    const double lp = ln_moment(tab, p);
    return (p * lq - q * lp) / (p - q);
}

double volume_factor(const MomentTable& tab, double q, double p) {
    return std::exp(log_volume_factor(tab, q, p));
}

double dimension(const MomentTable& tab, double q, double p) {
    const double ln_ell = ln_ell_of(tab);
    const double d = 3.0 - log_volume_factor(tab, q, p) / ln_ell;
    const double zq = linear_zeta(tab, tab.index_of(q), ln_ell);
    const double zp = linear_zeta(tab, tab.index_of(p), ln_ell);
    if (std::isfinite(zq) && std::isfinite(zp)) {
        const double alt = 3.0 - (p * zq - q * zp) / (p - q);
        // The exponent form amplifies rounding by |p q| / |p - q|.
        const double scale = std::max(1.0, std::abs(p * q) / std::abs(p - q));
        if (!close(d, alt, consistency_tol * scale))
            throw Error(ErrorKind::internal_consistency,
                        "D_{q,p} disagrees with the exponent form at q=" + std::to_string(q) +
                            ", p=" + std::to_string(p));
    }
    return d;
}

double log_active_volume(const MomentTable& tab, double p) {
    const std::size_t i = tab.index_of(p);
    if (p == 0.0) return 0.0;
    if (!tab.finite(i)) throw Error(ErrorKind::domain, "active volume: non-finite moments at p = " + std::to_string(p));
    return tab.ln_moments[i] - p * tab.mean_log[i];
}

double active_volume(const MomentTable& tab, double p) { return std::exp(log_active_volume(tab, p)); }

double dimension_p(const MomentTable& tab, double p) {
    const double ln_ell = ln_ell_of(tab);
    const double d = 3.0 - log_active_volume(tab, p) / ln_ell;
    const std::size_t i = tab.index_of(p);
    const double z = linear_zeta(tab, i, ln_ell);
    const double m = tab.moments[i];
    if (p != 0.0 && std::isfinite(z) && std::isfinite(tab.log_moments[i])) {
        const double z1 = tab.log_moments[i] / m / ln_ell;
        const double alt = 3.0 - z + p * z1;
        if (!close(d, alt, consistency_tol * std::max(1.0, std::abs(p))))
            throw Error(ErrorKind::internal_consistency,
                        "D_p disagrees with 3 - zeta_p + p zeta'_p at p=" + std::to_string(p));
    }
    return d;
}

double threshold(const MomentTable& tab, double q, double p) {
    if (q == p) throw Error(ErrorKind::argument, "threshold needs q != p (use threshold_p)");
    const double s = std::exp((ln_moment(tab, q) - ln_moment(tab, p)) / (q - p));
    if (s > tab.max_magnitude * (1.0 + 1e-12))
        throw Error(ErrorKind::internal_consistency, "threshold exceeds the largest magnitude");
    // Monotone in q against the neighbouring grid orders.
    const std::size_t iq = tab.index_of(q);
    auto neighbour = [&](std::size_t j) -> double {
        if (j >= tab.size() || tab.p_grid[j] == p || !std::isfinite(tab.ln_moments[j])) return nan_v;
        return std::exp((tab.ln_moments[j] - ln_moment(tab, p)) / (tab.p_grid[j] - p));
    };
    const double below = iq > 0 ? neighbour(iq - 1) : nan_v;
    const double above = neighbour(iq + 1);
    if ((std::isfinite(below) && below > s * (1.0 + 1e-10)) || (std::isfinite(above) && above < s * (1.0 - 1e-10)))
        throw Error(ErrorKind::internal_consistency, "threshold not monotone in q");
    return s;
}

double threshold_p(const MomentTable& tab, double p) {
    const std::size_t i = tab.index_of(p);
    if (!tab.finite(i)) throw Error(ErrorKind::domain, "threshold_p: non-finite moments at p = " + std::to_string(p));
    return std::exp(tab.mean_log[i]);
}

DiagonalProbe diagonal_limit_probe(const IncrementEnsemble& ens, double p, double delta) {
    const std::vector<double> grid{p - 2 * delta, p - delta, p, p + delta, p + 2 * delta};
    const MomentTable tab = moments(ens, grid);
    DiagonalProbe r;
    r.active_volume = p == 0.0 ? 1.0 : active_volume(tab, p);
    auto lnv = [&](std::size_t j) {
        if (!std::isfinite(tab.ln_moments[j])) return nan_v;
        return (p * tab.ln_moments[j] - grid[j] * tab.ln_moments[2]) / (p - grid[j]);
    };
    r.upper = std::exp(lnv(3));
    r.lower = std::exp(lnv(1));
    // First-order errors are odd in delta; one-sided extrapolation when p - delta
    // leaves the domain.
    if (std::isfinite(lnv(1)))
        r.richardson = std::exp(0.5 * (lnv(1) + lnv(3)));
    else
        r.richardson = std::exp(2.0 * lnv(3) - lnv(4));
    r.rel_error = std::abs(r.richardson / r.active_volume - 1.0);
    return r;
}

Estimate restore_threshold(std::span<const double> r_grid, std::span<const double> s_values, double q, double p) {
    if (r_grid.size() != s_values.size() || r_grid.size() < 2)
        throw Error(ErrorKind::argument, "restore_threshold: bad curve");
    if (q == p) throw Error(ErrorKind::argument, "restore_threshold: q == p");
    const double lo = std::min(p, q), hi = std::max(p, q);
    const double eps = 1e-9 * std::max(1.0, std::abs(hi));
    if (lo < r_grid.front() - eps || hi > r_grid.back() + eps)
        throw Error(ErrorKind::domain, "restore_threshold: interval escapes the r grid");
    auto ln_s_at = [&](double r) {
        const auto it = std::lower_bound(r_grid.begin(), r_grid.end(), r);
        std::size_t j = static_cast<std::size_t>(it - r_grid.begin());
        if (j < r_grid.size() && std::abs(r_grid[j] - r) <= eps) return std::log(s_values[j]);
        j = std::clamp<std::size_t>(j, 1, r_grid.size() - 1);
        const double t = (r - r_grid[j - 1]) / (r_grid[j] - r_grid[j - 1]);
        return (1 - t) * std::log(s_values[j - 1]) + t * std::log(s_values[j]);
    };
    std::vector<double> x{lo}, y{ln_s_at(lo)};
    for (std::size_t j = 0; j < r_grid.size(); ++j)
        if (r_grid[j] > lo + eps && r_grid[j] < hi - eps) {
            x.push_back(r_grid[j]);
            y.push_back(std::log(s_values[j]));
        }
    x.push_back(hi);
    y.push_back(ln_s_at(hi));
    const QuadResult qr = trapezoid(x, y);
    const double mean = qr.value / (hi - lo);
    Estimate e;
    e.value = std::exp(mean);
    e.error = e.value * qr.error / (hi - lo);
    return e;
}

DimensionCurve dimension_curve(const ScalingProfile& prof) {
    DimensionCurve c;
    c.s = prof.p_grid;
    c.D.resize(prof.size());
    for (std::size_t i = 0; i < prof.size(); ++i)
        c.D[i] = 3.0 - prof.zeta[i] + prof.p_grid[i] * prof.zeta1[i];
    for (std::size_t i = 0; i < prof.size(); ++i)
        if (prof.p_grid[i] == 0.0) c.zeta2_at_zero = prof.zeta2[i];
    return c;
}

namespace {

// Integrand (D_s - 3)/s^2 with its removable value at s = 0, integrated over
// [a, b] (a < b) on the curve's nodes plus interpolated endpoints.
QuadResult integrate_deficit(const DimensionCurve& c, double a, double b) {
    const auto& s = c.s;
    if (s.size() != c.D.size() || s.size() < 2) throw Error(ErrorKind::argument, "dimension curve: bad sizes");
    const double eps = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    if (a < s.front() - eps || b > s.back() + eps)
        throw Error(ErrorKind::domain, "dimension curve does not cover the integration interval");

    double at_zero = nan_v;
    if (a <= 0.0 && b >= 0.0) {
        const auto it = std::lower_bound(s.begin(), s.end(), -eps);
        const bool has_zero = it != s.end() && std::abs(*it) <= eps;
        if (has_zero) {
            const double d0 = c.D[static_cast<std::size_t>(it - s.begin())];
            if (std::abs(d0 - 3.0) > 1e-6)
                throw Error(ErrorKind::inconsistent_input, "D_0 differs from 3 by " + std::to_string(d0 - 3.0));
        }
        if (c.zeta2_at_zero) {
            at_zero = 0.5 * *c.zeta2_at_zero;
        } else {
            // Extrapolate from the two samples on each side of zero.
            std::vector<std::pair<double, double>> near;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (std::abs(s[i]) > eps) near.emplace_back(std::abs(s[i]), (c.D[i] - 3.0) / (s[i] * s[i]));
            std::sort(near.begin(), near.end());
            if (near.size() < 2) throw Error(ErrorKind::domain, "cannot extrapolate the integrand to s = 0");
            const auto [s1, g1] = near[0];
            const auto [s2, g2] = near[1];
            at_zero = s2 == s1 ? g1 : g1 - s1 * (g2 - g1) / (s2 - s1);
        }
    }
    auto g_node = [&](std::size_t i) {
        return std::abs(s[i]) <= eps ? at_zero : (c.D[i] - 3.0) / (s[i] * s[i]);
    };
    auto g_at = [&](double x) {
        if (std::abs(x) <= eps) return at_zero;
        const auto it = std::lower_bound(s.begin(), s.end(), x - eps);
        std::size_t j = static_cast<std::size_t>(it - s.begin());
        if (j < s.size() && std::abs(s[j] - x) <= eps) return g_node(j);
        j = std::clamp<std::size_t>(j, 1, s.size() - 1);
        const double t = (x - s[j - 1]) / (s[j] - s[j - 1]);
        const double d = (1 - t) * c.D[j - 1] + t * c.D[j];
        return (d - 3.0) / (x * x);
    };
    std::vector<double> x{a}, y{g_at(a)};
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] > a + eps && s[i] < b - eps) {
            x.push_back(s[i]);
            y.push_back(g_node(i));
        }
    x.push_back(b);
    y.push_back(g_at(b));
    return trapezoid(x, y);
}

}  // namespace

Estimate intermittency_correction(const DimensionCurve& curve, double p) {
    Estimate e;
    if (p == 0.0) return e;
    const QuadResult q = p > 0 ? integrate_deficit(curve, 0.0, p) : integrate_deficit(curve, p, 0.0);
    const double integral = p > 0 ? q.value : -q.value;
    e.value = p * integral;
    e.error = std::abs(p) * q.error;
    return e;
}

Estimate reconstruct_zeta(const DimensionCurve& curve, double zeta1_at_zero, double p) {
    Estimate e = intermittency_correction(curve, p);
    e.value += p * zeta1_at_zero;
    return e;
}

Estimate reconstruct_Dqp(const DimensionCurve& curve, double q, double p) {
    if (q == p) throw Error(ErrorKind::argument, "reconstruct_Dqp: q == p");
    Estimate e;
    if (q == 0.0 || p == 0.0) {
        e.value = 3.0;
        return e;
    }
    const double lo = std::min(p, q), hi = std::max(p, q);
    const QuadResult r = integrate_deficit(curve, lo, hi);
    const double integral = q > p ? r.value : -r.value;
    const double factor = q * p / (q - p);
    e.value = 3.0 + factor * integral;
    e.error = std::abs(factor) * r.error;
    e.extended = p * q < 0.0;
    return e;
}

VolumetricReport volumetric_report(const MomentTable& tab) {
    const double ln_ell = ln_ell_of(tab);
    const EffectiveDomain dom = effective_domain(tab);
    if (dom.empty) throw Error(ErrorKind::domain, "volumetric_report: empty domain");
    VolumetricReport r;
    r.ell = tab.ell;
    for (std::size_t i = dom.first; i <= dom.last; ++i) r.p_grid.push_back(tab.p_grid[i]);
    const std::size_t n = r.p_grid.size();
    r.V_qp.assign(n * n, nan_v);
    r.D_qp.assign(n * n, nan_v);
    r.s_qp.assign(n * n, nan_v);
    r.V_p.resize(n);
    r.D_p.resize(n);
    r.s_p.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = r.p_grid[i];
        r.V_p[i] = active_volume(tab, p);
        r.D_p[i] = dimension_p(tab, p);
        r.s_p[i] = p == 0.0 && tab.zero_fraction > 0.0 ? 0.0 : threshold_p(tab, p);
    }
    parallel_for(n, [&](std::size_t iq) {
        const double q = r.p_grid[iq];
        for (std::size_t ip = 0; ip < n; ++ip) {
            const double p = r.p_grid[ip];
            const std::size_t k = iq * n + ip;
            if (iq == ip) {
                r.V_qp[k] = r.V_p[ip];
                r.D_qp[k] = r.D_p[ip];
                r.s_qp[k] = r.s_p[ip];
                continue;
            }
            const double lnv = log_volume_factor(tab, q, p);
            r.V_qp[k] = std::exp(lnv);
            r.D_qp[k] = dimension(tab, q, p);
            r.s_qp[k] = std::exp((tab.ln_moments[tab.index_of(q)] - tab.ln_moments[tab.index_of(p)]) / (q - p));
        }
    });
    r.I_p.assign(n, nan_v);
    const bool has_zero = std::any_of(r.p_grid.begin(), r.p_grid.end(), [](double p) { return p == 0.0; });
    if (has_zero && n >= 2) {
        ScalingProfile prof = zeta(tab);
        const DimensionCurve curve = dimension_curve(prof);
        for (std::size_t i = 0; i < n; ++i) r.I_p[i] = intermittency_correction(curve, r.p_grid[i]).value;
    }
    r.flatness = nan_v;
    try {
        r.flatness = 1.0 / volume_factor(tab, 4.0, 2.0);
    } catch (const Error&) {
    }
    (void)ln_ell;
    return r;
}

void PropertyCheck::record(double margin, double tol) {
    if (evaluations == 0 || margin < worst_margin) worst_margin = margin;
    ++evaluations;
    if (margin < -tol) ++violations;
}

namespace {

struct Tables {
    MomentTable base;
    MomentTable scaled;
    std::vector<double> grid;  // finite orders common to both
};

Tables build_tables(const IncrementEnsemble& ens, std::span<const double> p_grid, double lambda) {
    Tables t{moments(ens, p_grid), moments(ens.scaled(lambda), p_grid), {}};
    for (std::size_t i = 0; i < t.base.size(); ++i)
        if (std::isfinite(t.base.ln_moments[i]) && std::isfinite(t.scaled.ln_moments[i]))
            t.grid.push_back(t.base.p_grid[i]);
    return t;
}

double lnv(const MomentTable& tab, double q, double p) { return log_volume_factor(tab, q, p); }

double ln_s(const MomentTable& tab, double q, double p) {
    return (tab.ln_moments[tab.index_of(q)] - tab.ln_moments[tab.index_of(p)]) / (q - p);
}

// Relative slack in log space.
double rel(double a, double b) { return 1.0 + std::max(std::abs(a), std::abs(b)); }

}  // namespace

std::vector<PropertyCheck> volume_properties(const IncrementEnsemble& ens, std::span<const double> p_grid,
                                             double lambda, double tol) {
    const Tables t = build_tables(ens, p_grid, lambda);
    const double ln_ell = ln_ell_of(t.base);
    PropertyCheck v1{"V1 adimensional"}, v2{"V2 symmetric"}, v3{"V3 homogeneous"}, v4{"V4 sign bounds"},
        v5{"V5 log-convex"}, v6{"V6 monotone in q"}, dc{"D convexity"};
    const auto& g = t.grid;
    for (double q : g)
        for (double p : g) {
            if (q == p) continue;
            const double a = lnv(t.base, q, p);
            const double as = lnv(t.scaled, q, p);
            v1.record(-std::abs(a - as) / rel(a, as), tol);
            const double b = lnv(t.base, p, q);
            v2.record(-std::abs(a - b) / rel(a, b), tol);
            const double c = lnv(t.scaled, p, q);
            v3.record(-std::abs(a - c) / rel(a, c), tol);
            if (q == 0.0 || p == 0.0)
                v4.record(-std::abs(a), tol);
            else if (p * q > 0.0)
                v4.record(-a / rel(a, 0.0), tol);  // ln V <= 0
            else
                v4.record(a / rel(a, 0.0), tol);   // ln V >= 0
        }
    // Log-convexity over triples; the printed orientation holds for q > 0 and
    // reverses for q < 0.
    for (std::size_t i1 = 0; i1 < g.size(); ++i1)
        for (std::size_t i2 = i1 + 1; i2 < g.size(); ++i2)
            for (std::size_t i3 = i2 + 1; i3 < g.size(); ++i3)
                for (double q : g) {
                    const double p1 = g[i1], p2 = g[i2], p3 = g[i3];
                    if (q == p1 || q == p2 || q == p3 || q == 0.0) continue;
                    const double l1 = (q - p1) / (q - p2) * (p3 - p2) / (p3 - p1);
                    const double l2 = (q - p3) / (q - p2) * (p2 - p1) / (p3 - p1);
                    const double mid = lnv(t.base, q, p2);
                    const double comb = l1 * lnv(t.base, q, p1) + l2 * lnv(t.base, q, p3);
                    const double orient = (q > p2 ? 1.0 : -1.0) * (q > 0.0 ? 1.0 : -1.0);
                    const double scale = rel(mid, comb) * (1.0 + std::abs(l1) + std::abs(l2));
                    v5.record(orient * (comb - mid) / scale, tol);
                    const double dm = 3.0 - mid / ln_ell;
                    const double dcomb = l1 * (3.0 - lnv(t.base, q, p1) / ln_ell) + l2 * (3.0 - lnv(t.base, q, p3) / ln_ell);
                    dc.record(orient * (dcomb - dm) / (rel(dm, dcomb) * (1.0 + std::abs(l1) + std::abs(l2))), tol);
                }
    for (double p : g) {
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (double q : g) {
            if (q == p) continue;
            const double a = lnv(t.base, q, p);
            if (std::isfinite(prev)) {
                const double step = a - prev;
                v6.record((p > 0.0 ? -step : step) / rel(a, prev), tol);
            }
            prev = a;
        }
    }
    return {v1, v2, v3, v4, v5, v6, dc};
}

std::vector<PropertyCheck> threshold_properties(const IncrementEnsemble& ens, std::span<const double> p_grid,
                                                double lambda, double tol) {
    const Tables t = build_tables(ens, p_grid, lambda);
    PropertyCheck s1{"s1 units"}, s2{"s2 symmetric"}, s3{"s3 1-homogeneous"}, s4{"s4 bounded by max"},
        s5{"s5 log-convex"}, s6{"s6 monotone in q"}, s7{"s7 product identity"};
    const auto& g = t.grid;
    const double ln_lambda = std::log(lambda);
    const double ln_max = std::log(t.base.max_magnitude);
    for (double q : g)
        for (double p : g) {
            if (q == p) continue;
            const double a = ln_s(t.base, q, p);
            const double as = ln_s(t.scaled, q, p);
            // Units: the threshold carries the unit of f, so rescaling shifts ln s by ln lambda.
            s1.record(-std::abs(as - a - ln_lambda) / rel(as, a), tol);
            s2.record(-std::abs(a - ln_s(t.base, p, q)) / rel(a, a), tol);
            s3.record(-std::abs(std::exp(as) - lambda * std::exp(a)) / (lambda * std::exp(a)), tol);
            s4.record((ln_max - a) / rel(ln_max, a), tol);
            const double lhs = p * a + lnv(t.base, q, p);
            const double rhs = t.base.ln_moments[t.base.index_of(p)];
            s7.record(-std::abs(lhs - rhs) / rel(lhs, rhs), tol);
        }
    for (std::size_t i1 = 0; i1 < g.size(); ++i1)
        for (std::size_t i2 = i1 + 1; i2 < g.size(); ++i2)
            for (std::size_t i3 = i2 + 1; i3 < g.size(); ++i3)
                for (double q : g) {
                    const double p1 = g[i1], p2 = g[i2], p3 = g[i3];
                    if (q == p1 || q == p2 || q == p3) continue;
                    const double l1 = (q - p1) / (q - p2) * (p3 - p2) / (p3 - p1);
                    const double l2 = (q - p3) / (q - p2) * (p2 - p1) / (p3 - p1);
                    const double mid = ln_s(t.base, q, p2);
                    const double comb = l1 * ln_s(t.base, q, p1) + l2 * ln_s(t.base, q, p3);
                    const double orient = q < p2 ? 1.0 : -1.0;
                    s5.record(orient * (comb - mid) / (rel(mid, comb) * (1.0 + std::abs(l1) + std::abs(l2))), tol);
                }
    for (double p : g) {
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (double q : g) {
            if (q == p) continue;
            const double a = ln_s(t.base, q, p);
            if (std::isfinite(prev)) s6.record((a - prev) / rel(a, prev), tol);
            prev = a;
        }
    }
    return {s1, s2, s3, s4, s5, s6, s7};
}

}  // namespace multifrac

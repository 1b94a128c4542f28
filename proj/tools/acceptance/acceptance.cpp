#include "acceptance.hpp"

#include <multifrac/concentration.hpp>
#include <multifrac/ensemble.hpp>
#include <multifrac/error.hpp>
#include <multifrac/generators.hpp>
#include <multifrac/mfr.hpp>
#include <multifrac/numeric.hpp>
#include <multifrac/scaling.hpp>
#include <multifrac/spectrum.hpp>
#include <multifrac/volumetrics.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace multifrac::acceptance {

namespace {

// Pinned tolerances; Options::tolerance_scale multiplies all of them.
namespace tol {
constexpr double mono_zeta = 0.05;
constexpr double mono_dim = 0.1;
constexpr double mono_threshold = 0.10;  // relative
constexpr double kfamily_zeta = 0.07;
constexpr double identity_dim = 1e-9;
constexpr double identity_rel = 1e-10;
constexpr double property = 1e-9;
constexpr double diagonal_probe = 1e-6;
constexpr double legendre = 1e-6;
constexpr double width_slack = 1e-9;
constexpr double reconstruction = 1e-3;
constexpr double sandwich_sigmas = 3.0;
constexpr double zeta2_variance = 1e-12;
constexpr double spectral_exponent = 0.05;
constexpr double gaussian_pair = 1e-6;
constexpr double parseval = 1e-10;
constexpr double dyadic_ratio = 0.35;
constexpr double flatness_halfwidth = 0.1;
}  // namespace tol

namespace budget {
constexpr double mono = 120.0;
constexpr double identity = 60.0;
constexpr double rademacher = 300.0;
constexpr double spectrum = 120.0;
}  // namespace budget

std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(clock::now() - start_).count(); }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

// 1. Mono-fractal reproduction, 1D at l = 2^-8 plus a 3D l = 2^-6 grid.
CriterionResult mono_fractal(const Options& o) {
    CriterionResult r{1, "mono-fractal reproduction"};
    Stopwatch sw;
    const double s = o.tolerance_scale;
    double worst_zeta = 0.0, worst_dim = 0.0, worst_thr = 0.0;
    struct Setup {
        int dims;
        std::size_t n;
        double ell;
    };
    for (const Setup& st : {Setup{1, 2048, 1.0 / 256}, Setup{3, 64, 1.0 / 64}}) {
        MonoFractalSpec spec;
        spec.dims = st.dims;
        spec.n = st.n;
        spec.ell = st.ell;
        spec.D = 2.5;
        spec.seed = o.seed;
        const auto field = gen_monofractal(spec);
        const auto dirs = axis_directions(st.dims);
        const auto ens = increments(field, st.ell, dirs);
        const auto grid = arange(1.0, 6.0, 0.25);
        const auto tab = moments(ens, grid);
        const auto prof = zeta(tab);
        for (std::size_t i = 0; i < prof.size(); ++i) {
            const double p = prof.p_grid[i];
            worst_zeta = std::max(worst_zeta, std::abs(prof.zeta[i] - (0.5 + p / 6.0)));
            worst_dim = std::max(worst_dim, std::abs(dimension_p(tab, p) - 2.5));
            worst_thr = std::max(worst_thr, rel_diff(threshold_p(tab, p), spec.amplitude()));
        }
    }
    const double t = sw.seconds();
    r.pass = worst_zeta <= tol::mono_zeta * s && worst_dim <= tol::mono_dim * s &&
             worst_thr <= tol::mono_threshold * s && t <= budget::mono;
    r.metrics = {{"max_zeta_error", worst_zeta}, {"max_D_error", worst_dim}, {"max_s_rel_error", worst_thr}};
    r.detail = fmt("max|zeta-(1/2+p/6)|=%.3g (<=%.3g) max|D_p-2.5|=%.3g (<=%.3g) max|s_p/U0-1|=%.3g (<=%.3g)",
                   worst_zeta, tol::mono_zeta * s, worst_dim, tol::mono_dim * s, worst_thr, tol::mono_threshold * s);
    return r;
}

// 2. K-family polygon with kinks at p = 1 and p = 4.
CriterionResult k_family(const Options& o) {
    CriterionResult r{2, "K-family polygon"};
    MultiFractalSpec spec;
    spec.dims = 1;
    spec.n = std::size_t{1} << 20;
    spec.ell = std::ldexp(1.0, -20);
    spec.seed = o.seed;
    spec.nodes = {{0.095, 2.2}, {0.22, 2.7}, {0.42, 2.9}};
    const auto field = gen_multifractal(spec);
    const auto dirs = axis_directions(1);
    const auto ens = increments(field, spec.ell, dirs);
    const double step = 0.05;
    const auto grid = arange(0.25, 8.5, step);
    const auto tab = moments(ens, grid);
    const auto prof = zeta(tab);

    double worst = 0.0;
    for (std::size_t i = 0; i < prof.size(); ++i) {
        const double p = prof.p_grid[i];
        if (p < 0.5 - 1e-12 || p > 8.0 + 1e-12) continue;
        worst = std::max(worst, std::abs(prof.zeta[i] - ref_kfamily_zeta(p, spec.nodes)));
    }
    // Kinks: local maxima of -zeta'' well above the background, refined by a parabola.
    std::vector<double> curv(prof.size());
    for (std::size_t i = 0; i < prof.size(); ++i) curv[i] = -prof.zeta2[i];
    const double peak_floor = 0.25 * *std::max_element(curv.begin(), curv.end());
    std::vector<double> found;
    for (std::size_t i = 1; i + 1 < curv.size(); ++i)
        if (curv[i] > curv[i - 1] && curv[i] >= curv[i + 1] && curv[i] > peak_floor) {
            const double den = curv[i - 1] - 2.0 * curv[i] + curv[i + 1];
            const double shift = den != 0.0 ? 0.5 * (curv[i - 1] - curv[i + 1]) / den : 0.0;
            found.push_back(prof.p_grid[i] + std::clamp(shift, -0.5, 0.5) * step);
        }
    auto expected = ref_kfamily_kinks(spec.nodes);
    std::sort(expected.begin(), expected.end());
    double kink_err = found.size() == expected.size() ? 0.0 : std::numeric_limits<double>::infinity();
    if (found.size() == expected.size())
        for (std::size_t k = 0; k < found.size(); ++k) kink_err = std::max(kink_err, std::abs(found[k] - expected[k]));
    const double s = o.tolerance_scale;
    r.pass = worst <= tol::kfamily_zeta * s && kink_err <= step * s * (1.0 + 1e-9);
    r.metrics = {{"max_zeta_error", worst}, {"kink_error", kink_err}, {"kinks_found", double(found.size())}};
    std::string where;
    for (double f : found) where += fmt("%s%.3f", where.empty() ? "" : ",", f);
    r.detail = fmt("max|zeta-polygon|=%.4f (<=%.3g) kinks at {%s} vs {1,4}, max error %.3g (<=%.3g)", worst,
                   tol::kfamily_zeta * s, where.c_str(), kink_err, step * s);
    return r;
}

IncrementEnsemble random_atomic(std::mt19937_64& rng, bool& has_zero) {
    std::uniform_int_distribution<int> count(2, 12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::gamma_distribution<double> dirichlet(1.0);
    const int n = count(rng);
    std::vector<double> mags, weights;
    for (int i = 0; i < n; ++i) {
        mags.push_back(0.05 * std::pow(3.0 / 0.05, unit(rng)));
        weights.push_back(dirichlet(rng) + 1e-3);
    }
    has_zero = unit(rng) < 0.2;
    if (has_zero) mags[0] = 0.0;
    const double ell = std::pow(2.0, -1.0 - 9.0 * unit(rng));
    return IncrementEnsemble::atomic(ell, mags, weights);
}

struct Tally {
    std::size_t checks = 0;
    std::size_t failures = 0;
    double worst = 0.0;  // worst error / tolerance ratio
    std::string first_failure;

    void check(bool ok, double ratio, const std::string& what) {
        ++checks;
        worst = std::max(worst, ratio);
        if (!ok) {
            ++failures;
            if (first_failure.empty()) first_failure = what;
        }
    }
    void bound(double err, double limit, const std::string& what) {
        check(err <= limit, limit > 0.0 ? err / limit : 0.0, what);
    }
};

// 3. Identity and lemma suite on randomized atomic ensembles.
CriterionResult identity_suite(const Options& o) {
    CriterionResult r{3, "identity suite"};
    Stopwatch sw;
    const double s = o.tolerance_scale;
    std::mt19937_64 rng(splitmix64(o.seed + 3));
    Tally t;
    const auto full_grid = arange(-3.0, 6.0, 0.5);
    const auto positive_grid = arange(0.5, 6.0, 0.5);
    constexpr int trials = 1000;
    for (int trial = 0; trial < trials; ++trial) {
        bool has_zero = false;
        const auto ens = random_atomic(rng, has_zero);
        const auto& grid = has_zero ? positive_grid : full_grid;
        const std::string tag = fmt("ensemble %d", trial);
        try {
            auto tab = moments(ens, grid);
            if (o.corrupt_moments)
                for (auto& m : tab.moments) m *= 1.0 + 1e-6;
            const auto prof = zeta(tab);
            const double ln_ell = std::log(ens.ell);
            for (std::size_t i = 0; i < prof.size(); ++i) {
                const double p = prof.p_grid[i];
                const double D = dimension_p(tab, p);
                t.bound(std::abs(D - (3.0 - prof.zeta[i] + p * prof.zeta1[i])), tol::identity_dim * s, tag + ": D_p identity");
                const double V = active_volume(tab, p);
                t.bound(rel_diff(V, std::exp((3.0 - D) * ln_ell)), tol::identity_rel * s, tag + ": V_p = l^{3-D_p}");
                const double ln_lhs = p * std::log(threshold_p(tab, p)) + std::log(V);
                t.bound(std::abs(std::expm1(ln_lhs - tab.ln_moments[tab.index_of(p)])), tol::identity_rel * s,
                        tag + ": s_p^p V_p = <f^p>");
                const auto F = Density::from_ensemble(ens, p);
                const auto e = entropy(F);
                t.bound(rel_diff(V, e.V), tol::identity_rel * s, tag + ": V_p = e^{-H}");
                t.check(csiszar_kullback_check(F).pass, 0.0, tag + ": Csiszar-Kullback");
                for (double eps : {0.1, 0.5, 0.9}) t.check(weak_concentration(F, eps).pass, 0.0, tag + ": weak concentration");
                t.check(strong_concentration(F, std::max(e.H, 1e-3) * 1.5).pass, 0.0, tag + ": strong concentration");
                t.check(active_region(ens, p, 0.5, 2.0).pass, 0.0, tag + ": active region bound");
                const double U0 = ens.magnitudes[ens.size() / 2] + 0.1;
                for (double c : {0.25, 0.5, 0.75}) t.check(log_concentration(ens, p, U0, c).pass, 0.0, tag + ": ln+ concentration");
            }
            for (std::size_t i = 0; i < prof.size(); ++i)
                for (std::size_t j = i + 1; j < prof.size(); j += 3) {
                    const double p = prof.p_grid[i], q = prof.p_grid[j];
                    const double Dqp = dimension(tab, q, p);
                    t.bound(std::abs(Dqp - (3.0 - log_volume_factor(tab, q, p) / ln_ell)), tol::identity_dim * s,
                            tag + ": D_{q,p} identity");
                    if (p >= 0.0) {
                        const auto cs = concentration_set(ens, q, p);
                        t.check(cs.pass, 0.0, tag + ": concentration set lemma");
                        t.bound(std::abs(cs.set_measure - cs.target_measure), 1e-12, tag + ": set measure exactness");
                    }
                    const auto aq = active_region_qp(ens, q, p);
                    t.check(aq.pass(), 0.0, tag + ": A_{q,p} bounds");
                    t.check(active_region_qp(ens, q, p, 0.5).pass(), 0.0, tag + ": A_{q,p} bounds, sigma 1/2");
                }
            const double lambda = 0.3 + 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            for (const auto& pc : volume_properties(ens, grid, lambda, tol::property * s))
                t.check(pc.pass(), 0.0, tag + ": " + pc.name);
            for (const auto& pc : threshold_properties(ens, grid, lambda, tol::property * s))
                t.check(pc.pass(), 0.0, tag + ": " + pc.name);
            t.check(ratio_bounds_check(prof, tol::property * s).pass, 0.0, tag + ": ratio bounds");
            for (double p : {1.0, 2.5}) {
                const auto probe = diagonal_limit_probe(ens, p);
                t.bound(probe.rel_error, tol::diagonal_probe * s, tag + ": diagonal limit");
            }
        } catch (const Error& e) {
            t.check(false, 0.0, tag + ": " + e.what());
        }
    }
    const double secs = sw.seconds();
    r.pass = t.failures == 0 && secs <= budget::identity;
    r.metrics = {{"ensembles", double(trials)}, {"checks", double(t.checks)}, {"failures", double(t.failures)},
                 {"worst_error_over_tolerance", t.worst}};
    r.detail = fmt("%d ensembles, %zu checks, %zu failures, worst error/tolerance %.3g", trials, t.checks,
                   t.failures, t.worst);
    if (!t.first_failure.empty()) r.detail += "; first failure: " + t.first_failure;
    if (secs > budget::identity) r.detail += fmt("; runtime %.1fs over budget", secs);
    return r;
}

// 4. Legendre round trips, parametric spectrum, width identity.
CriterionResult legendre_machinery(const Options& o) {
    CriterionResult r{4, "Legendre machinery"};
    const double s = o.tolerance_scale;
    Tally t;
    double worst_round = 0.0, worst_param = 0.0, width_residual = 0.0;

    // Quadratic profile zeta = p/3 - 0.01 p^2 on [-4, 8].
    {
        const auto p = arange(-4.0, 8.0, 0.01);
        std::vector<double> z, z1, z2, h;
        for (double x : p) {
            z.push_back(x / 3.0 - 0.01 * x * x);
            z1.push_back(1.0 / 3.0 - 0.02 * x);
            z2.push_back(-0.02);
        }
        h = z1;
        std::sort(h.begin(), h.end());
        const auto prof = ScalingProfile::from_curves(0.1, p, z, z1, z2, {-4.0, 8.0, false, false});
        const auto spec = legendre(prof, h);
        for (std::size_t i = 0; i < h.size(); ++i) {
            const double pstar = (1.0 / 3.0 - h[i]) / 0.02;
            worst_round = std::max(worst_round, std::abs(spec.d[i] - (3.0 - 0.01 * pstar * pstar)));
        }
        const auto back = inverse_legendre(spec, p);
        for (std::size_t i = 0; i < p.size(); ++i) worst_round = std::max(worst_round, std::abs(back[i] - z[i]));
        std::vector<double> Dp;
        for (std::size_t i = 0; i < p.size(); ++i) Dp.push_back(3.0 - z[i] + p[i] * z1[i]);
        try {
            worst_param = dh_from_Dp(Dp, prof, tol::legendre * s).max_deviation;
        } catch (const Error& e) {
            worst_param = std::numeric_limits<double>::infinity();
            t.check(false, 0.0, std::string("quadratic dh_from_Dp: ") + e.what());
        }
    }
    // Polygon family.
    {
        const std::vector<KNode> nodes{{0.095, 2.2}, {0.22, 2.7}, {0.42, 2.9}};
        const auto p = arange(0.0, 8.0, 0.01);
        std::vector<double> z, z1, z2(p.size(), 0.0), h;
        for (double x : p) {
            z.push_back(ref_kfamily_zeta(x, nodes));
            double slope = nodes.front().h;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& nd : nodes) {
                const double v = 3.0 + x * nd.h - nd.dim;
                if (v < best - 1e-12) {
                    best = v;
                    slope = nd.h;
                }
            }
            z1.push_back(slope);
        }
        for (const auto& nd : nodes) h.push_back(nd.h);
        const auto prof = ScalingProfile::from_curves(0.1, p, z, z1, z2, {0.0, 8.0, false, false});
        const auto spec = legendre(prof, h);
        for (std::size_t k = 0; k < nodes.size(); ++k)
            worst_round = std::max(worst_round, std::abs(spec.d[k] - nodes[k].dim));
        const auto back = inverse_legendre(spec, p);
        for (std::size_t i = 0; i < p.size(); ++i) worst_round = std::max(worst_round, std::abs(back[i] - z[i]));
    }
    // Width identity on a bounded three-atom ensemble over a wide p range.
    {
        const auto ens = IncrementEnsemble::atomic(0.1, {0.2, 1.0, 3.0}, {0.3, 0.5, 0.2});
        const auto grid = arange(-40.0, 40.0, 0.05);
        const auto prof = zeta(moments(ens, grid));
        const auto w = spectrum_width_check(prof, tol::width_slack * s);
        width_residual = w.residual;
        t.check(w.pass, 0.0, fmt("width identity residual %.3g", w.residual));
    }
    t.bound(worst_round, tol::legendre * s, "Legendre round trip");
    t.bound(worst_param, tol::legendre * s, "dh_from_Dp agreement");
    r.pass = t.failures == 0;
    r.metrics = {{"round_trip_error", worst_round}, {"parametric_error", worst_param}, {"width_residual", width_residual}};
    r.detail = fmt("round trip %.3g, parametric %.3g (<=%.3g); width identity residual %.3g", worst_round,
                   worst_param, tol::legendre * s, width_residual);
    if (!t.first_failure.empty()) r.detail += "; first failure: " + t.first_failure;
    return r;
}

// 5. zeta_p and D_{q,p} rebuilt from the diagonal dimensions.
CriterionResult reconstruction(const Options& o) {
    CriterionResult r{5, "reconstruction"};
    std::mt19937_64 rng(splitmix64(o.seed + 5));
    std::normal_distribution<double> g(0.0, 0.5);
    std::vector<double> mags(20000);
    for (double& m : mags) m = std::exp(g(rng));
    const auto ens = IncrementEnsemble::uniform(1.0 / 64, mags);
    const auto grid = arange(-3.0, 6.0, 0.01);
    const auto tab = moments(ens, grid);
    const auto prof = zeta(tab);
    const auto curve = dimension_curve(prof);
    double worst_zeta = 0.0, worst_dqp = 0.0;
    for (double p : {-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) {
        const auto est = reconstruct_zeta(curve, prof.zeta1_at_zero(), p);
        worst_zeta = std::max(worst_zeta, std::abs(est.value - prof.zeta[prof.index_of(p)]));
    }
    const std::vector<std::pair<double, double>> pairs{{2, 1}, {4, 2}, {6, 3}, {5, 0.5}, {-1, -3}, {3, -2}, {1, -1}};
    for (auto [q, p] : pairs) {
        const auto est = reconstruct_Dqp(curve, q, p);
        worst_dqp = std::max(worst_dqp, std::abs(est.value - dimension(tab, q, p)));
    }
    const double lim = tol::reconstruction * o.tolerance_scale;
    r.pass = worst_zeta <= lim && worst_dqp <= lim;
    r.metrics = {{"zeta_error", worst_zeta}, {"Dqp_error", worst_dqp}};
    r.detail = fmt("max|zeta rebuilt - measured|=%.3g, max|D_qp rebuilt - direct|=%.3g (<=%.3g)", worst_zeta,
                   worst_dqp, lim);
    return r;
}

RademacherSpec sandwich_spec(std::uint64_t seed, std::size_t n, std::size_t members) {
    RademacherSpec spec;
    spec.dims = 3;
    spec.n = n;
    spec.components = 3;
    spec.members = members;
    spec.seed = seed;
    spec.modes = band_limited_modes(3, 3, 1.0, 8.0, -11.0 / 6.0, seed ^ 0x5eedULL);
    return spec;
}

// 6. Random-field sandwich for the ensemble mean of zeta_p.
CriterionResult random_sandwich(const Options& o) {
    CriterionResult r{6, "random-field sandwich"};
    Stopwatch sw;
    constexpr std::size_t M = 64;
    const auto spec = sandwich_spec(o.seed + 6, 64, M);
    const std::vector<double> ps{2.0, 3.0, 4.0, 6.0, 8.0};
    const std::vector<double> ells{1.0 / 16, 1.0 / 64};
    const auto dirs = axis_directions(3);
    // ln<|du|^p> per (ell, member, p)
    std::vector<std::vector<std::vector<double>>> lnm(ells.size(), std::vector<std::vector<double>>(M));
    for (std::size_t m = 0; m < M; ++m) {
        const auto field = gen_rademacher_member(spec, m);
        for (std::size_t e = 0; e < ells.size(); ++e) {
            const auto tab = moments(increments(field, ells[e], dirs), ps);
            lnm[e][m] = tab.ln_moments;
        }
    }
    bool ok = true;
    double worst_var = 0.0, worst_margin = std::numeric_limits<double>::infinity();
    std::string detail;
    for (std::size_t e = 0; e < ells.size(); ++e) {
        const double L = std::log(ells[e]);
        // Rescale u so the ensemble mean of zeta_3 is 1: zeta_p shifts by p ln(lambda)/ln(ell).
        double z3 = 0.0;
        for (std::size_t m = 0; m < M; ++m) z3 += lnm[e][m][1] / L;
        z3 /= static_cast<double>(M);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const double p = ps[i];
            double mean = 0.0, sq = 0.0;
            for (std::size_t m = 0; m < M; ++m) {
                const double z = lnm[e][m][i] / L + p * (1.0 - z3) / 3.0;
                mean += z;
                sq += z * z;
            }
            mean /= static_cast<double>(M);
            const double var = std::max(0.0, (sq - static_cast<double>(M) * mean * mean) / static_cast<double>(M - 1));
            if (p == 2.0) {
                worst_var = std::max(worst_var, var);
                continue;
            }
            const double se = std::sqrt(var / static_cast<double>(M));
            const auto b = ref_random_bounds(p, ells[e]);
            const double k = tol::sandwich_sigmas * o.tolerance_scale;
            const double margin = std::min(mean - (b.lower - k * se), (b.upper + k * se) - mean);
            worst_margin = std::min(worst_margin, margin);
            ok = ok && margin >= 0.0;
            r.metrics.push_back({fmt("mean_zeta_%g_ell_%g", p, ells[e]), mean});
            detail += fmt("%sl=2^%d p=%g: %.4f in [%.4f, %.4f]", detail.empty() ? "" : "; ",
                          static_cast<int>(std::lround(std::log2(ells[e]))), p, mean, b.lower, b.upper);
        }
    }
    const double secs = sw.seconds();
    const double var_lim = tol::zeta2_variance * o.tolerance_scale;
    r.pass = ok && worst_var <= var_lim && secs <= budget::rademacher;
    r.metrics.push_back({"zeta2_variance", worst_var});
    r.metrics.push_back({"worst_margin", worst_margin});
    r.detail = fmt("M=%zu, var(zeta_2)=%.2g (<=%.2g), worst margin %.4f; ", M, worst_var, var_lim, worst_margin) + detail;
    return r;
}

// 7. Forward and converse power laws, Gaussian pair, Parseval.
CriterionResult spectrum_correspondence(const Options& o) {
    CriterionResult r{7, "spectrum correspondence"};
    Stopwatch sw;
    const double s = o.tolerance_scale;
    Tally t;
    double worst_fwd = 0.0, worst_conv = 0.0;
    std::string detail;
    for (double a : {0.4, 2.0 / 3.0, 1.0, 1.4, 1.8}) {
        constexpr double c = 0.5, energy = 1.0;
        auto ell = logspace(1e-7, 6.0, 3000);
        ell.insert(ell.begin(), 0.0);
        std::vector<double> gamma;
        for (double x : ell) gamma.push_back((energy - c * std::pow(x, a)) * std::exp(-x * x));
        const auto corr = correlation_from_gamma(ell, gamma, energy);
        const auto kappa = logspace(20.0, 2000.0, 40);
        const auto spec = spectrum_from_correlation(corr, kappa);
        const double fwd = slope_fit(spec.kappa, spec.E, 20.0, 200.0).exponent;
        worst_fwd = std::max(worst_fwd, std::abs(fwd - (-1.0 - a)));

        SpectrumCurve pl;
        pl.kappa = logspace(1.0, 1000.0, 200);
        for (double k : pl.kappa) pl.E.push_back(c * std::pow(k, -1.0 - a));
        const auto ls = logspace(1e-6, 1e-4, 20);
        const auto s2 = s2_from_spectrum(pl, ls);
        const double conv = slope_fit(s2.ell, s2.s2, 1e-6, 1e-4).exponent;
        worst_conv = std::max(worst_conv, std::abs(conv - a));
        detail += fmt("%salpha=%.3g: E~k^%.3f, S2~l^%.3f", detail.empty() ? "" : "; ", a, fwd, conv);
    }
    t.bound(worst_fwd, tol::spectral_exponent * s, "forward exponent");
    t.bound(worst_conv, tol::spectral_exponent * s, "converse exponent");

    double gauss_err = 0.0;
    {
        auto ell = logspace(1e-6, 6.0, 3000);
        ell.insert(ell.begin(), 0.0);
        std::vector<double> s2;
        for (double x : ell) s2.push_back(-std::expm1(-x * x));
        const auto spec = spectrum_from_correlation(correlation_from_s2(ell, s2, 1.0), linspace(1.0, 50.0, 99));
        double peak = 0.0, err = 0.0;
        for (std::size_t i = 0; i < spec.kappa.size(); ++i) {
            const double k = spec.kappa[i];
            const double exact = k * k * std::exp(-0.25 * k * k) / (2.0 * std::sqrt(std::numbers::pi));
            peak = std::max(peak, exact);
            err = std::max(err, std::abs(spec.E[i] - exact));
        }
        gauss_err = err / peak;
    }
    t.bound(gauss_err, tol::gaussian_pair * s, "Gaussian pair");

    double parseval_err = 0.0;
    {
        const auto spec = sandwich_spec(o.seed + 7, 32, 1);
        const auto field = gen_rademacher_member(spec, 0);
        const auto E = spectrum_from_field(field);
        CompensatedSum total, energy;
        for (std::size_t i = 0; i < E.E.size(); ++i) total.add(E.E[i] * 2.0 * std::numbers::pi);
        const auto v = field.values();
        for (double x : v) energy.add(0.5 * x * x);
        const double half_mean_sq = energy.value() / static_cast<double>(field.nodes());
        parseval_err = rel_diff(total.value(), half_mean_sq);
    }
    t.bound(parseval_err, tol::parseval * s, "Parseval");
    const double secs = sw.seconds();
    r.pass = t.failures == 0 && secs <= budget::spectrum;
    r.metrics = {{"forward_exponent_error", worst_fwd},
                 {"converse_exponent_error", worst_conv},
                 {"gaussian_error", gauss_err},
                 {"parseval_error", parseval_err}};
    r.detail = fmt("exponent errors fwd %.3g conv %.3g (<=%.3g), Gaussian %.2g (<=%.2g), Parseval %.2g (<=%.2g); ",
                   worst_fwd, worst_conv, tol::spectral_exponent * s, gauss_err, tol::gaussian_pair * s,
                   parseval_err, tol::parseval * s) +
               detail;
    return r;
}

// 8. Dyadic counterexample: captured entropy ratio at n = 4, 16, 64.
CriterionResult dyadic(const Options& o) {
    CriterionResult r{8, "concentration asymptotics"};
    const double r4 = dyadic_counterexample(4).ratio;
    const double r16 = dyadic_counterexample(16).ratio;
    const double r64 = dyadic_counterexample(64).ratio;
    const double lim = tol::dyadic_ratio * o.tolerance_scale;
    r.pass = r64 < r16 && r16 < r4 && r64 <= lim;
    r.metrics = {{"ratio_4", r4}, {"ratio_16", r16}, {"ratio_64", r64}};
    r.detail = fmt("captured/H: n=4 %.4f, n=16 %.4f, n=64 %.4f; need decreasing and ratio(64) <= %.3g", r4, r16,
                   r64, lim);
    return r;
}

// 9. Flatness of a Gaussian sample.
CriterionResult gaussian_flatness(const Options& o) {
    CriterionResult r{9, "Gaussian flatness"};
    std::mt19937_64 rng(splitmix64(o.seed + 9));
    std::normal_distribution<double> g;
    std::vector<double> mags(1000000);
    for (double& m : mags) m = std::abs(g(rng));
    const std::vector<double> grid{2.0, 4.0};
    const auto rep = volumetric_report(moments(IncrementEnsemble::uniform(0.5, mags), grid));
    const double half = tol::flatness_halfwidth * o.tolerance_scale;
    r.pass = std::abs(rep.flatness - 3.0) <= half;
    r.metrics = {{"flatness", rep.flatness}};
    r.detail = fmt("1/V_{4,2} = %.4f on 1e6 samples (want [%.3g, %.3g])", rep.flatness, 3.0 - half, 3.0 + half);
    return r;
}

}  // namespace

CriterionResult run_criterion(int id, const Options& opts) {
    static const char* names[] = {"",
                                  "mono-fractal reproduction",
                                  "K-family polygon",
                                  "identity suite",
                                  "Legendre machinery",
                                  "reconstruction",
                                  "random-field sandwich",
                                  "spectrum correspondence",
                                  "concentration asymptotics",
                                  "Gaussian flatness"};
    if (id < 1 || id > criterion_count) throw Error(ErrorKind::argument, "no criterion " + std::to_string(id));
    Stopwatch sw;
    CriterionResult r;
    try {
        switch (id) {
            case 1: r = mono_fractal(opts); break;
            case 2: r = k_family(opts); break;
            case 3: r = identity_suite(opts); break;
            case 4: r = legendre_machinery(opts); break;
            case 5: r = reconstruction(opts); break;
            case 6: r = random_sandwich(opts); break;
            case 7: r = spectrum_correspondence(opts); break;
            case 8: r = dyadic(opts); break;
            default: r = gaussian_flatness(opts); break;
        }
    } catch (const std::exception& e) {
        r = CriterionResult{id, names[id], false, std::string("error: ") + e.what()};
    }
    r.seconds = sw.seconds();
    return r;
}

std::vector<CriterionResult> run_suite(const Options& opts, std::ostream* progress) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= criterion_count; ++id) {
        if (!opts.only.empty() && !opts.only.contains(id)) continue;
        out.push_back(run_criterion(id, opts));
        if (progress) *progress << summary_line(out.back()) << std::endl;
    }
    return out;
}

std::string summary_line(const CriterionResult& r) {
    return fmt("criterion %d [%s] %s (%.1fs): ", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL", r.seconds) + r.detail;
}

std::string suite_json(const std::vector<CriterionResult>& results) {
    auto arr = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& r : results) {
        nlohmann::ordered_json m = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.metrics) m[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
        arr.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds},
                       {"detail", r.detail}, {"metrics", m}});
        all = all && r.pass;
    }
    return nlohmann::ordered_json{{"pass", all}, {"criteria", arr}}.dump(2) + "\n";
}

}  // namespace multifrac::acceptance

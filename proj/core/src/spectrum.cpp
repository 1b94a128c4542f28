#include "multifrac/spectrum.hpp"

#include "multifrac/error.hpp"
#include "multifrac/numeric.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

namespace multifrac {

namespace {

constexpr double pi = std::numbers::pi;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Gauss-Legendre over [a, b] split into panels no wider than max_width.
template <class F>
double gl_panels(double a, double b, double max_width, F&& f, CompensatedSum& acc) {
    if (!(b > a)) return 0.0;
    const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
    const double h = (b - a) / static_cast<double>(m);
    const auto& x = gauss8_nodes();
    const auto& w = gauss8_weights();
    for (std::size_t j = 0; j < m; ++j) {
        const double lo = a + h * static_cast<double>(j);
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (std::size_t k = 0; k < 8; ++k) s += w[k] * f(mid + 0.5 * h * x[k]);
        acc.add(0.5 * h * s);
    }
    return acc.value();
}

// Gamma on [0, l_max] from the samples, tail model beyond.
class GammaModel {
public:
    explicit GammaModel(const CorrelationCurve& c) : energy_(c.energy), lmax_(c.ell_max()), tail_(c.tail_constant) {
        std::vector<double> lx, ly;
        bool positive = true;
        for (std::size_t i = 0; i < c.ell.size(); ++i) {
            if (c.ell[i] <= 0.0) continue;
            const double d = energy_ - c.gamma[i];
            if (!(d > 0.0)) {
                positive = false;
                break;
            }
            lx.push_back(std::log(c.ell[i]));
            ly.push_back(std::log(d));
        }
        if (positive && lx.size() >= 3) {
            log_mode_ = true;
            spline_ = CubicSpline(lx, ly);
            l0_ = std::exp(lx.front());
            d0_ = std::exp(ly.front());
            slope0_ = spline_.derivative(lx.front());
            for (double v : lx) knots_.push_back(std::exp(v));
        } else {
            std::vector<double> x(c.ell.begin(), c.ell.end()), y(c.gamma.begin(), c.gamma.end());
            if (x.front() > 0.0) {
                x.insert(x.begin(), 0.0);
                y.insert(y.begin(), energy_);
            }
            spline_ = CubicSpline(x, y);
            knots_ = x;
            l0_ = 0.0;
        }
    }

    double operator()(double l) const {
        if (l >= lmax_) return tail_ * std::pow(1.0 + l, -4.0);
        if (!log_mode_) return spline_(l);
        if (l < l0_) return energy_ - d0_ * std::pow(l / l0_, slope0_);
        return energy_ - std::exp(spline_(std::log(l)));
    }

    const std::vector<double>& knots() const { return knots_; }
    double first_knot() const { return l0_; }
    double lmax() const { return lmax_; }

private:
    double energy_, lmax_, tail_;
    bool log_mode_ = false;
    CubicSpline spline_;
    double l0_ = 0.0, d0_ = 0.0, slope0_ = 0.0;
    std::vector<double> knots_;
};

// Cutoff: 1 on [0, L], degree-9 smoothstep down to 0 on [L, 2L].
double cutoff(double l, double L, int order = 0) {
    const double t = (l - L) / L;
    if (order == 0) return 1.0 - smoothstep9(t, 0);
    return -smoothstep9(t, order) / std::pow(L, order);
}

// Fourth derivative of G(l) = l C (1 + l)^{-4} (1 - chi(l)).
double tail_g4(double l, double C, double L) {
    std::array<double, 5> T{};  // T^{(k)} of C (1 + l)^{-4}
    double coef = C;
    for (int k = 0; k <= 4; ++k) {
        T[static_cast<std::size_t>(k)] = coef * std::pow(1.0 + l, -4.0 - k);
        coef *= -(4.0 + k);
    }
    std::array<double, 5> P{};  // (l T)^{(k)}
    P[0] = l * T[0];
    for (std::size_t k = 1; k <= 4; ++k) P[k] = l * T[k] + static_cast<double>(k) * T[k - 1];
    static constexpr std::array<double, 5> binom{1, 4, 6, 4, 1};
    double g = 0.0;
    for (std::size_t k = 0; k <= 4; ++k) {
        const double w = k == 0 ? 1.0 - cutoff(l, L) : -cutoff(l, L, static_cast<int>(k));
        g += binom[k] * P[4 - k] * w;
    }
    return g;
}

long signed_k(std::size_t i, std::size_t n) {
    const auto si = static_cast<long>(i);
    const auto sn = static_cast<long>(n);
    return 2 * si <= sn ? si : si - sn;
}

struct ModePower {
    double k;      // |k| in integer units
    double power;  // sum over components of |u_k|^2
};

std::vector<ModePower> mode_powers(const GridField& field) {
    const std::size_t n = field.n();
    const std::size_t total = field.nodes();
    const int dims = field.dims();
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    if (!buf) throw Error(ErrorKind::capacity, "spectrum: allocation failed");
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = dims == 1 ? fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE)
                         : fftw_plan_dft_3d(static_cast<int>(n), static_cast<int>(n), static_cast<int>(n), buf, buf,
                                            FFTW_FORWARD, FFTW_ESTIMATE);
    }
    std::vector<double> power(total, 0.0);
    const auto vals = field.values();
    const double norm = 1.0 / static_cast<double>(total);
    for (std::size_t c = 0; c < field.components(); ++c) {
        for (std::size_t i = 0; i < total; ++i) {
            buf[i][0] = vals[i * field.components() + c];
            buf[i][1] = 0.0;
        }
        fftw_execute(plan);
        for (std::size_t i = 0; i < total; ++i) {
            const double re = buf[i][0] * norm, im = buf[i][1] * norm;
            power[i] += re * re + im * im;
        }
    }
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);

    std::vector<ModePower> out;
    out.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        if (power[i] == 0.0) continue;
        double k2 = 0.0;
        if (dims == 1) {
            const double k = static_cast<double>(signed_k(i, n));
            k2 = k * k;
        } else {
            const double a = static_cast<double>(signed_k(i / (n * n), n));
            const double b = static_cast<double>(signed_k((i / n) % n, n));
            const double z = static_cast<double>(signed_k(i % n, n));
            k2 = a * a + b * b + z * z;
        }
        out.push_back({std::sqrt(k2), power[i]});
    }
    return out;
}

}  // namespace

double one_minus_sinc(double x) noexcept {
    const double ax = std::abs(x);
    if (ax < 0.1) {
        const double x2 = x * x;
        return x2 * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 5040.0 - x2 / 362880.0)));
    }
    return 1.0 - std::sin(x) / x;
}

namespace {

// int_X^inf x^{-g} sin x dx (want_sin) or cos x dx, by repeated integration by parts.
double oscillatory_tail(double g, double X, bool want_sin, int depth) {
    if (depth == 0) return 0.0;
    if (want_sin) return std::pow(X, -g) * std::cos(X) - g * oscillatory_tail(g + 1.0, X, false, depth - 1);
    return -std::pow(X, -g) * std::sin(X) + g * oscillatory_tail(g + 1.0, X, true, depth - 1);
}

}  // namespace

double sinc_tail_integral(double beta, double a) {
    if (!(beta > 1.0 && beta < 3.0)) throw Error(ErrorKind::argument, "sinc tail integral needs 1 < beta < 3");
    if (!(a > 0.0)) throw Error(ErrorKind::argument, "sinc tail integral needs a > 0");
    constexpr double X = 100.0;
    const auto far = [beta](double x) {
        return std::pow(x, 1.0 - beta) / (beta - 1.0) - oscillatory_tail(beta + 1.0, x, true, 16);
    };
    if (a >= X) return far(a);
    const auto f = [beta](double x) { return std::pow(x, -beta) * one_minus_sinc(x); };
    CompensatedSum acc;
    double lo = a;
    if (a < 1.0) {
        // Geometric panels toward a.
        double x = a;
        while (x < 1.0) {
            const double next = std::min(1.0, 2.0 * x);
            gl_panels(x, next, next - x, f, acc);
            x = next;
        }
        lo = 1.0;
    }
    gl_panels(lo, X, 0.5, f, acc);
    return acc.value() + far(X);
}

CorrelationCurve correlation_from_gamma(std::span<const double> ell, std::span<const double> gamma, double energy) {
    if (ell.size() != gamma.size() || ell.size() < 4)
        throw Error(ErrorKind::argument, "correlation: need >= 4 samples of equal length");
    if (!(energy > 0.0) || !std::isfinite(energy)) throw Error(ErrorKind::argument, "correlation: energy must be positive");
    for (std::size_t i = 0; i < ell.size(); ++i) {
        if (!std::isfinite(ell[i]) || !std::isfinite(gamma[i]) || ell[i] < 0.0)
            throw Error(ErrorKind::argument, "correlation: samples must be finite, l >= 0");
        if (i > 0 && !(ell[i] > ell[i - 1])) throw Error(ErrorKind::argument, "correlation: l grid must increase");
    }
    CorrelationCurve c;
    c.ell.assign(ell.begin(), ell.end());
    c.gamma.assign(gamma.begin(), gamma.end());
    c.energy = energy;
    const double L = c.ell.back();
    c.tail_constant = c.gamma.back() * std::pow(1.0 + L, 4.0);
    return c;
}

CorrelationCurve correlation_from_s2(std::span<const double> ell, std::span<const double> s2, double energy) {
    if (ell.size() != s2.size()) throw Error(ErrorKind::argument, "correlation: size mismatch");
    std::vector<double> gamma(s2.size());
    for (std::size_t i = 0; i < s2.size(); ++i) {
        if (s2[i] < 0.0) throw Error(ErrorKind::argument, "correlation: S2 must be non-negative");
        if (s2[i] > 2.0 * energy * (1.0 + 1e-12))
            throw Error(ErrorKind::inconsistent_input, "correlation: S2 exceeds twice the energy");
        gamma[i] = energy - s2[i];
    }
    return correlation_from_gamma(ell, gamma, energy);
}

FitResult slope_fit(std::span<const double> x, std::span<const double> y, double lo, double hi) {
    if (x.size() != y.size()) throw Error(ErrorKind::argument, "slope fit: size mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i]))
            throw Error(ErrorKind::fit, "slope fit: non-positive value in range");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 5) throw Error(ErrorKind::fit, "slope fit: fewer than 5 points in range");
    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::fit, "slope fit: degenerate abscissae");
    FitResult r;
    r.exponent = sxy / sxx;
    const double intercept = my - r.exponent * mx;
    r.prefactor = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double d = ly[i] - (intercept + r.exponent * lx[i]);
        ss += d * d;
    }
    r.residual = std::sqrt(ss / m);
    r.lo = lo;
    r.hi = hi;
    r.points = lx.size();
    r.power_law = r.residual <= 0.05;
    return r;
}

SpectrumCurve spectrum_from_correlation(const CorrelationCurve& corr, std::span<const double> kappa) {
    if (corr.ell.size() < 4) throw Error(ErrorKind::argument, "spectrum: correlation curve too short");
    const double L = corr.ell_max();
    if (std::abs(corr.gamma.back()) > corr.decay_threshold * corr.energy)
        throw Error(ErrorKind::convergence, "spectrum: correlation does not decay on the sampled range");
    const GammaModel gamma(corr);

    // Breakpoints: geometric toward 0, data knots, then the cutoff ramp.
    std::vector<double> breaks{0.0};
    const double l0 = gamma.first_knot();
    if (l0 > 0.0)
        for (int j = 40; j >= 1; --j) breaks.push_back(l0 * std::ldexp(1.0, -j));
    for (double k : gamma.knots())
        if (k > breaks.back() && k < L) breaks.push_back(k);
    breaks.push_back(L);
    breaks.push_back(2.0 * L);

    const double C = corr.tail_constant;
    SpectrumCurve out;
    out.kappa.assign(kappa.begin(), kappa.end());
    out.E.assign(kappa.size(), 0.0);
    parallel_for(kappa.size(), [&](std::size_t i) {
        const double k = kappa[i];
        if (!(k >= 0.0) || !std::isfinite(k)) throw Error(ErrorKind::argument, "spectrum: kappa must be >= 0");
        if (k == 0.0) return;
        const double width = 2.0 * pi / k / 8.0;
        const auto near = [&](double l) { return l * std::sin(k * l) * gamma(l) * cutoff(l, L); };
        CompensatedSum acc;
        for (std::size_t b = 0; b + 1 < breaks.size(); ++b) gl_panels(breaks[b], breaks[b + 1], width, near, acc);

        // Far range after four integrations by parts; skipped when provably negligible.
        if (C != 0.0) {
            const double T = 2.0 * L + 40.0 * (1.0 + L);
            const auto g4 = [&](double l) { return tail_g4(l, C, L); };
            CompensatedSum bound;
            gl_panels(L, T, std::max(L / 16.0, 0.25), [&](double l) { return std::abs(g4(l)); }, bound);
            const double scale = bound.value() / std::pow(k, 4.0);
            if (scale > 1e-12 * std::abs(acc.value())) {
                CompensatedSum far;
                const double fw = std::max(width, (T - L) / 2e6);
                gl_panels(L, T, fw, [&](double l) { return g4(l) * std::sin(k * l); }, far);
                acc.add(far.value() / std::pow(k, 4.0));
            }
        }
        out.E[i] = 2.0 / pi * k * acc.value();
    });
    for (double e : out.E) out.negative_noise = std::max(out.negative_noise, -e);
    return out;
}

SpectrumCurve spectrum_from_field(const GridField& field, double shell_width,
                                  std::optional<std::pair<double, double>> fit_band) {
    field.validate();
    if (shell_width <= 0.0) shell_width = 2.0 * pi;
    const auto modes = mode_powers(field);
    const double kmax = std::sqrt(static_cast<double>(field.dims())) * static_cast<double>(field.n()) / 2.0;
    const auto bins = static_cast<std::size_t>(std::floor(2.0 * pi * kmax / shell_width + 0.5)) + 1;
    std::vector<CompensatedSum> acc(bins);
    for (const auto& m : modes) {
        const auto j = static_cast<std::size_t>(std::floor(2.0 * pi * m.k / shell_width + 0.5));
        acc[std::min(j, bins - 1)].add(0.5 * m.power / shell_width);
    }
    SpectrumCurve out;
    for (std::size_t j = 0; j < bins; ++j) {
        out.kappa.push_back(static_cast<double>(j) * shell_width);
        out.E.push_back(acc[j].value());
    }
    const double half = static_cast<double>(field.n()) / 2.0;
    const auto band = fit_band.value_or(std::pair{8.0 * half / 128.0, 80.0 * half / 128.0});
    try {
        out.fit = slope_fit(out.kappa, out.E, 2.0 * pi * band.first, 2.0 * pi * band.second);
    } catch (const Error&) {
        out.fit.reset();
    }
    return out;
}

StructureCurve s2_from_spectrum(const SpectrumCurve& spec, std::span<const double> ell, bool extrapolate) {
    const auto& K = spec.kappa;
    const auto& E = spec.E;
    if (K.size() != E.size() || K.size() < 2) throw Error(ErrorKind::argument, "S2: spectrum needs >= 2 points");
    for (std::size_t i = 1; i < K.size(); ++i)
        if (!(K[i] > K[i - 1])) throw Error(ErrorKind::argument, "S2: kappa grid must increase");

    StructureCurve out;
    double tail_A = 0.0, tail_beta = 0.0;
    if (extrapolate && E.back() > 0.0) {
        const std::size_t m = std::max<std::size_t>(5, K.size() / 10);
        if (K.size() < m) throw Error(ErrorKind::fit, "S2: too few points to fit the spectral tail");
        const auto fit = slope_fit(std::span(K).last(m), std::span(E).last(m), K[K.size() - m], K.back());
        tail_beta = -fit.exponent;
        if (!(tail_beta > 1.0)) throw Error(ErrorKind::convergence, "S2: spectrum is not integrable (tail exponent <= 1)");
        if (tail_beta >= 3.0) tail_beta = std::min(tail_beta, 3.0 - 1e-9);
        // Anchor the law on the last sample so E stays continuous.
        tail_A = E.back() * std::pow(K.back(), tail_beta);
        out.tail_exponent = tail_beta;
    }

    out.ell.assign(ell.begin(), ell.end());
    out.s2.assign(ell.size(), 0.0);
    parallel_for(ell.size(), [&](std::size_t i) {
        const double l = ell[i];
        if (!(l > 0.0)) return;
        const double width = 2.0 * pi / l / 8.0;
        CompensatedSum acc;
        for (std::size_t s = 0; s + 1 < K.size(); ++s) {
            const double a = K[s], b = K[s + 1];
            const double ea = E[s], eb = E[s + 1];
            const bool loglog = ea > 0.0 && eb > 0.0 && a > 0.0;
            const double slope = loglog ? std::log(eb / ea) / std::log(b / a) : 0.0;
            const auto f = [&](double k) {
                const double e = loglog ? ea * std::pow(k / a, slope) : ea + (eb - ea) * (k - a) / (b - a);
                return e * one_minus_sinc(k * l);
            };
            gl_panels(a, b, width, f, acc);
        }
        if (tail_A > 0.0) acc.add(tail_A * std::pow(l, tail_beta - 1.0) * sinc_tail_integral(tail_beta, K.back() * l));
        out.s2[i] = acc.value();
    });
    return out;
}

std::vector<double> s2_haar_from_field(const GridField& field, std::span<const double> ell) {
    field.validate();
    const auto modes = mode_powers(field);
    std::vector<double> out(ell.size(), 0.0);
    for (std::size_t i = 0; i < ell.size(); ++i) {
        CompensatedSum acc;
        for (const auto& m : modes) {
            const double x = 2.0 * pi * m.k * ell[i];
            const double factor = field.dims() == 1 ? 1.0 - std::cos(x) : one_minus_sinc(x);
            acc.add(0.5 * m.power * factor);
        }
        out[i] = acc.value();
    }
    return out;
}

}  // namespace multifrac

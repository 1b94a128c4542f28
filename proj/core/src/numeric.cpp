#include "multifrac/numeric.hpp"

#include "multifrac/error.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

namespace multifrac {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

// Shift the argument up with psi(x) = psi(x+1) - 1/x, then use the asymptotic
// series at x >= 10.
double digamma(double x) {
    if (!std::isfinite(x)) return x > 0 ? x : std::nan("");
    if (x <= 0.0 && x == std::floor(x)) return std::nan("");
    if (x < 0.0) {
        // Reflection: psi(1-x) - psi(x) = pi cot(pi x)
        return digamma(1.0 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
    }
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132)))));
    return acc + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
    if (!std::isfinite(x)) return x > 0 ? 0.0 : std::nan("");
    if (x <= 0.0 && x == std::floor(x)) return std::nan("");
    if (x < 0.0) {
        const double s = std::sin(std::numbers::pi * x);
        return -trigamma(1.0 - x) + std::numbers::pi * std::numbers::pi / (s * s);
    }
    double acc = 0.0;
    while (x < 10.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv * (1.0 + inv * (0.5 + inv * (1.0 / 6 - inv2 * (1.0 / 30 - inv2 * (1.0 / 42 - inv2 * (1.0 / 30))))));
    return acc + series;
}

QuadResult trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::argument, "trapezoid: size mismatch");
    QuadResult r;
    if (x.size() < 2) return r;
    CompensatedSum sum;
    double h_max = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = x[i + 1] - x[i];
        if (!(h > 0.0)) throw Error(ErrorKind::argument, "trapezoid: grid not increasing");
        h_max = std::max(h_max, h);
        sum.add(0.5 * h * (y[i] + y[i + 1]));
    }
    double curv = 0.0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double h0 = x[i] - x[i - 1];
        const double h1 = x[i + 1] - x[i];
        const double d2 = 2.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0) / (h0 + h1);
        curv = std::max(curv, std::abs(d2));
    }
    r.value = sum.value();
    r.error = (x.back() - x.front()) * h_max * h_max * curv / 12.0;
    return r;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n != y_.size() || n < 2) throw Error(ErrorKind::argument, "spline: need >= 2 matching points");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i + 1] > x_[i])) throw Error(ErrorKind::argument, "spline: knots not increasing");
    m_.assign(n, 0.0);
    if (n == 2) return;
    // Tridiagonal system for interior second derivatives (natural ends).
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
        const double rhs = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        const double denom = b - a * c[i - 1];
        c[i] = cc / denom;
        d[i] = (rhs - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = d[i] - c[i] * m_[i + 1];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::segment(double t) const noexcept {
    if (t <= x_.front()) return 0;
    if (t >= x_.back()) return x_.size() - 2;
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double CubicSpline::eval_segment(std::size_t i, double t) const noexcept {
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h) / 6.0;
}

double CubicSpline::operator()(double t) const { return eval_segment(segment(t), t); }

double CubicSpline::derivative(double t) const {
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

namespace {
using Gauss8 = boost::math::quadrature::gauss<double, 8>;

std::array<double, 8> expand(bool weights) {
    // Boost stores the non-negative half of the symmetric rule.
    const auto& a = Gauss8::abscissa();
    const auto& w = Gauss8::weights();
    std::array<double, 8> out{};
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[k++] = weights ? w[i] : a[i];
        if (a[i] != 0.0) out[k++] = weights ? w[i] : -a[i];
    }
    return out;
}
}  // namespace

const std::array<double, 8>& gauss8_nodes() {
    static const std::array<double, 8> nodes = expand(false);
    return nodes;
}

const std::array<double, 8>& gauss8_weights() {
    static const std::array<double, 8> weights = expand(true);
    return weights;
}

double smoothstep9(double t, int order) noexcept {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return order == 0 ? 1.0 : 0.0;
    // S(t) = 126t^5 - 420t^6 + 540t^7 - 315t^8 + 70t^9
    static constexpr std::array<double, 10> c{0, 0, 0, 0, 0, 126, -420, 540, -315, 70};
    double acc = 0.0;
    for (int k = 9; k >= order; --k) {
        double coef = c[static_cast<std::size_t>(k)];
        for (int j = 0; j < order; ++j) coef *= (k - j);
        acc = acc * t + coef;
    }
    // Horner above accumulated powers t^(k-order) for k >= order.
    return acc;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::size_t thread_count() {
    if (const char* env = std::getenv("MULTIFRAC_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < count; i += workers) body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<double> linspace(double a, double b, std::size_t count) {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = a;
        return v;
    }
    for (std::size_t i = 0; i < count; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    return v;
}

std::vector<double> logspace(double a, double b, std::size_t count) {
    auto v = linspace(std::log(a), std::log(b), count);
    for (auto& x : v) x = std::exp(x);
    if (count > 1) {
        v.front() = a;
        v.back() = b;
    }
    return v;
}

std::vector<double> arange(double a, double b, double step) {
    if (!(step > 0.0)) throw Error(ErrorKind::argument, "arange: step must be positive");
    std::vector<double> v;
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-6)) + 1;
    v.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double x = a + step * static_cast<double>(i);
        if (std::abs(x) < 1e-12 * step) x = 0.0;
        v.push_back(x);
    }
    return v;
}

}  // namespace multifrac

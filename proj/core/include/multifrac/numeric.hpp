#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace multifrac {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double digamma(double x);
double trigamma(double x);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // heuristic bound: span * h_max^2 * max|f''| / 12
};

// Composite trapezoid over a (possibly non-uniform) strictly increasing grid.
QuadResult trapezoid(std::span<const double> x, std::span<const double> y);

// Maximizer of a unimodal function on [a, b].
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol);

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;
    double derivative(double t) const;
    // Evaluation restricted to segment i, t in [x_i, x_{i+1}].
    double eval_segment(std::size_t i, double t) const noexcept;
    std::span<const double> knots() const noexcept { return x_; }
    std::size_t segment(double t) const noexcept;
    bool empty() const noexcept { return x_.empty(); }

private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives at knots
};

// Fixed 8-point Gauss-Legendre rule on [-1, 1].
const std::array<double, 8>& gauss8_nodes();
const std::array<double, 8>& gauss8_weights();

// Degree-9 smoothstep S(t): S(0)=0, S(1)=1, derivatives 1..4 vanish at both ends.
// Returns S^{(order)}(t) for order 0..4, clamped outside [0, 1].
double smoothstep9(double t, int order = 0) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Worker count from MULTIFRAC_THREADS, else hardware concurrency (>= 1).
std::size_t thread_count();

// Runs body(i) for i in [0, count) on up to thread_count() threads. Each index is
// processed exactly once; results must be written to per-index slots.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

std::vector<double> linspace(double a, double b, std::size_t count);
std::vector<double> logspace(double a, double b, std::size_t count);
// a, a+step, ... up to b (inclusive within step/1e6).
std::vector<double> arange(double a, double b, double step);

}  // namespace multifrac

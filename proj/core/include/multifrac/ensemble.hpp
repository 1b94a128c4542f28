#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace multifrac {

// Periodic vector field on a uniform n^dims grid over the unit box. Storage is
// row-major over grid indices with components innermost.
class GridField {
public:
    GridField(int dims, std::size_t n, std::size_t components);

    int dims() const noexcept { return dims_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t components() const noexcept { return components_; }
    std::size_t nodes() const noexcept { return nodes_; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    // Flat node index of a (possibly out-of-range) lattice point, wrapped.
    std::size_t node(std::array<std::int64_t, 3> idx) const noexcept;
    double& at(std::array<std::int64_t, 3> idx, std::size_t c) noexcept;
    double at(std::array<std::int64_t, 3> idx, std::size_t c) const noexcept;

    // Throws if any component is non-finite.
    void validate() const;

private:
    int dims_;
    std::size_t n_;
    std::size_t components_;
    std::size_t nodes_;
    std::vector<double> values_;
};

class Direction {
public:
    // Normalizes v; throws on a zero vector.
    explicit Direction(std::array<double, 3> v);
    const std::array<double, 3>& vec() const noexcept { return v_; }

private:
    std::array<double, 3> v_;
};

// 3D: six axis directions plus eight main diagonals. 1D: +x and -x.
std::vector<Direction> default_directions(int dims);
std::vector<Direction> axis_directions(int dims);
// Uniform on the unit sphere (3D) or random sign (1D).
std::vector<Direction> random_directions(int dims, std::size_t count, std::uint64_t seed);

struct IncrementEnsemble {
    double ell = 0.0;
    std::vector<double> magnitudes;
    std::vector<double> weights;
    double max_scale_error = 0.0;  // worst |l_eff - l| / l over directions

    // Weighted atoms; weights are normalized to sum 1.
    static IncrementEnsemble atomic(double ell, std::vector<double> magnitudes,
                                    std::vector<double> weights);
    static IncrementEnsemble uniform(double ell, std::vector<double> magnitudes);

    std::size_t size() const noexcept { return magnitudes.size(); }
    // Same atoms with every magnitude multiplied by factor.
    IncrementEnsemble scaled(double factor) const;
    void validate() const;
};

IncrementEnsemble increments(const GridField& field, double ell,
                             std::span<const Direction> directions, std::size_t stride = 1);

// Magnitudes below this are exact zeros.
inline constexpr double zero_floor = 1e-300;

struct MomentTable {
    double ell = 0.0;
    std::vector<double> p_grid;
    // Plain weighted averages; may overflow to +inf at large |p|.
    std::vector<double> moments;       // <f^p>
    std::vector<double> log_moments;   // <f^p ln f>
    std::vector<double> log2_moments;  // <f^p ln^2 f>
    // Overflow-free forms used downstream.
    std::vector<double> ln_moments;    // ln <f^p>
    std::vector<double> mean_log;      // <f^p ln f> / <f^p>
    std::vector<double> mean_log2;     // <f^p ln^2 f> / <f^p>
    double zero_fraction = 0.0;
    double max_magnitude = 0.0;
    double min_positive_magnitude = 0.0;

    std::size_t size() const noexcept { return p_grid.size(); }
    bool finite(std::size_t i) const noexcept;
    // Grid index of p (matched within 1e-9); throws domain error if absent.
    std::size_t index_of(double p) const;
};

MomentTable moments(const IncrementEnsemble& ens, std::span<const double> p_grid);

struct EffectiveDomain {
    bool empty = true;
    std::size_t first = 0;  // inclusive grid indices of the finite sub-grid
    std::size_t last = 0;
    double p_min = 0.0;
    double p_max = 0.0;
    bool p_min_infinite = false;
    bool p_max_infinite = false;

    std::size_t count() const noexcept { return empty ? 0 : last - first + 1; }
};

EffectiveDomain effective_domain(const MomentTable& tab);

}  // namespace multifrac

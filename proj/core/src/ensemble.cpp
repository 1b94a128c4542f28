#include "multifrac/ensemble.hpp"

#include "multifrac/error.hpp"
#include "multifrac/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace multifrac {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

std::int64_t wrap(std::int64_t i, std::int64_t n) noexcept {
    const std::int64_t r = i % n;
    return r < 0 ? r + n : r;
}
}  // namespace

GridField::GridField(int dims, std::size_t n, std::size_t components)
    : dims_(dims), n_(n), components_(components) {
    if (dims != 1 && dims != 3) throw Error(ErrorKind::argument, "GridField: dims must be 1 or 3");
    if (n == 0 || components == 0) throw Error(ErrorKind::argument, "GridField: empty grid");
    nodes_ = dims == 1 ? n : n * n * n;
    values_.assign(nodes_ * components_, 0.0);
}

std::size_t GridField::node(std::array<std::int64_t, 3> idx) const noexcept {
    const auto n = static_cast<std::int64_t>(n_);
    if (dims_ == 1) return static_cast<std::size_t>(wrap(idx[0], n));
    return static_cast<std::size_t>((wrap(idx[0], n) * n + wrap(idx[1], n)) * n + wrap(idx[2], n));
}

double& GridField::at(std::array<std::int64_t, 3> idx, std::size_t c) noexcept {
    return values_[node(idx) * components_ + c];
}

double GridField::at(std::array<std::int64_t, 3> idx, std::size_t c) const noexcept {
    return values_[node(idx) * components_ + c];
}

void GridField::validate() const {
    for (double v : values_)
        if (!std::isfinite(v)) throw Error(ErrorKind::argument, "GridField: non-finite component");
}

Direction::Direction(std::array<double, 3> v) : v_(v) {
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw Error(ErrorKind::argument, "Direction: zero vector");
    for (auto& x : v_) x /= norm;
}

std::vector<Direction> axis_directions(int dims) {
    if (dims == 1) return {Direction({1, 0, 0}), Direction({-1, 0, 0})};
    std::vector<Direction> out;
    for (int a = 0; a < 3; ++a)
        for (double s : {1.0, -1.0}) {
            std::array<double, 3> v{0, 0, 0};
            v[static_cast<std::size_t>(a)] = s;
            out.emplace_back(v);
        }
    return out;
}

std::vector<Direction> default_directions(int dims) {
    auto out = axis_directions(dims);
    if (dims == 3)
        for (double x : {1.0, -1.0})
            for (double y : {1.0, -1.0})
                for (double z : {1.0, -1.0}) out.emplace_back(std::array<double, 3>{x, y, z});
    return out;
}

std::vector<Direction> random_directions(int dims, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(splitmix64(seed));
    std::vector<Direction> out;
    out.reserve(count);
    if (dims == 1) {
        std::bernoulli_distribution coin(0.5);
        for (std::size_t i = 0; i < count; ++i) out.emplace_back(std::array<double, 3>{coin(rng) ? 1.0 : -1.0, 0, 0});
        return out;
    }
    std::normal_distribution<double> g;
    while (out.size() < count) {
        std::array<double, 3> v{g(rng), g(rng), g(rng)};
        if (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] > 1e-24) out.emplace_back(v);
    }
    return out;
}

IncrementEnsemble IncrementEnsemble::atomic(double ell, std::vector<double> magnitudes,
                                            std::vector<double> weights) {
    if (magnitudes.size() != weights.size() || magnitudes.empty())
        throw Error(ErrorKind::argument, "ensemble: magnitudes/weights size mismatch");
    CompensatedSum total;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::argument, "ensemble: invalid weight");
        total.add(w);
    }
    if (!(total.value() > 0.0)) throw Error(ErrorKind::argument, "ensemble: zero total weight");
    const double t = total.value();
    for (auto& w : weights) w /= t;
    IncrementEnsemble e{ell, std::move(magnitudes), std::move(weights), 0.0};
    e.validate();
    return e;
}

IncrementEnsemble IncrementEnsemble::uniform(double ell, std::vector<double> magnitudes) {
    std::vector<double> w(magnitudes.size(), 1.0);
    return atomic(ell, std::move(magnitudes), std::move(w));
}

IncrementEnsemble IncrementEnsemble::scaled(double factor) const {
    IncrementEnsemble e = *this;
    for (auto& m : e.magnitudes) m *= factor;
    return e;
}

void IncrementEnsemble::validate() const {
    if (magnitudes.size() != weights.size()) throw Error(ErrorKind::argument, "ensemble: size mismatch");
    for (double m : magnitudes)
        if (!(m >= 0.0) || !std::isfinite(m)) throw Error(ErrorKind::argument, "ensemble: invalid magnitude");
    CompensatedSum total;
    for (double w : weights) total.add(w);
    if (std::abs(total.value() - 1.0) > 1e-12) throw Error(ErrorKind::argument, "ensemble: weights do not sum to 1");
}

IncrementEnsemble increments(const GridField& field, double ell,
                             std::span<const Direction> directions, std::size_t stride) {
    if (directions.empty()) throw Error(ErrorKind::argument, "increments: empty direction set");
    if (stride == 0) throw Error(ErrorKind::argument, "increments: stride must be positive");
    if (!(ell > 0.0 && ell <= 0.5)) throw Error(ErrorKind::scale, "increments: ell must lie in (0, 1/2]");
    const auto n = static_cast<double>(field.n());
    if (ell * n < 1.0 - 1e-12) throw Error(ErrorKind::resolution, "increments: ell below grid resolution");

    const int dims = field.dims();
    std::vector<std::array<std::int64_t, 3>> shifts;
    double worst = 0.0;
    for (const auto& d : directions) {
        const auto& v = d.vec();
        if (dims == 1 && (std::abs(v[1]) > 1e-12 || std::abs(v[2]) > 1e-12))
            throw Error(ErrorKind::argument, "increments: off-axis direction on a 1D grid");
        std::array<std::int64_t, 3> s{0, 0, 0};
        double len2 = 0.0;
        for (int a = 0; a < dims; ++a) {
            s[static_cast<std::size_t>(a)] = std::llround(ell * n * v[static_cast<std::size_t>(a)]);
            len2 += static_cast<double>(s[static_cast<std::size_t>(a)] * s[static_cast<std::size_t>(a)]);
        }
        if (len2 == 0.0) throw Error(ErrorKind::resolution, "increments: displacement rounds to zero");
        worst = std::max(worst, std::abs(std::sqrt(len2) / n - ell) / ell);
        shifts.push_back(s);
    }

    const std::size_t m = (field.n() + stride - 1) / stride;
    const std::size_t per_dir = dims == 1 ? m : m * m * m;
    const std::size_t comps = field.components();
    std::vector<double> mags(per_dir * shifts.size());
    const auto vals = field.values();

    parallel_for(shifts.size(), [&](std::size_t di) {
        const auto& s = shifts[di];
        std::size_t out = di * per_dir;
        const auto N = static_cast<std::int64_t>(field.n());
        const auto st = static_cast<std::int64_t>(stride);
        const std::int64_t iy_end = dims == 1 ? 1 : N;
        const std::int64_t iz_end = dims == 1 ? 1 : N;
        const std::int64_t step_yz = dims == 1 ? 1 : st;
        for (std::int64_t ix = 0; ix < N; ix += st)
            for (std::int64_t iy = 0; iy < iy_end; iy += step_yz)
                for (std::int64_t iz = 0; iz < iz_end; iz += step_yz) {
                    const std::size_t a = field.node({ix, iy, iz}) * comps;
                    const std::size_t b = field.node({ix + s[0], iy + s[1], iz + s[2]}) * comps;
                    double acc = 0.0;
                    for (std::size_t c = 0; c < comps; ++c) {
                        const double d = vals[b + c] - vals[a + c];
                        acc += d * d;
                    }
                    mags[out++] = std::sqrt(acc);
                }
    });

    IncrementEnsemble e;
    e.ell = ell;
    e.weights.assign(mags.size(), 1.0 / static_cast<double>(mags.size()));
    e.magnitudes = std::move(mags);
    e.max_scale_error = worst;
    return e;
}

bool MomentTable::finite(std::size_t i) const noexcept {
    return std::isfinite(ln_moments[i]) && std::isfinite(mean_log[i]) && std::isfinite(mean_log2[i]);
}

std::size_t MomentTable::index_of(double p) const {
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        if (std::abs(p_grid[i] - p) <= 1e-9 * std::max(1.0, std::abs(p))) return i;
    throw Error(ErrorKind::domain, "moment table has no entry for p = " + std::to_string(p));
}

MomentTable moments(const IncrementEnsemble& ens, std::span<const double> p_grid) {
    for (std::size_t i = 0; i + 1 < p_grid.size(); ++i)
        if (!(p_grid[i + 1] > p_grid[i])) throw Error(ErrorKind::argument, "moments: p grid not increasing");

    MomentTable t;
    t.ell = ens.ell;
    t.p_grid.assign(p_grid.begin(), p_grid.end());
    const std::size_t np = p_grid.size();
    t.moments.resize(np);
    t.log_moments.resize(np);
    t.log2_moments.resize(np);
    t.ln_moments.resize(np);
    t.mean_log.resize(np);
    t.mean_log2.resize(np);

    // Zero atoms and logs of positive atoms, computed once.
    std::vector<double> logs(ens.size());
    CompensatedSum zero_w;
    double max_mag = 0.0;
    double min_pos = inf;
    for (std::size_t j = 0; j < ens.size(); ++j) {
        const double f = ens.magnitudes[j];
        if (f < zero_floor) {
            logs[j] = -inf;
            zero_w.add(ens.weights[j]);
        } else {
            logs[j] = std::log(f);
            max_mag = std::max(max_mag, f);
            min_pos = std::min(min_pos, f);
        }
    }
    t.zero_fraction = zero_w.value();
    t.max_magnitude = max_mag;
    t.min_positive_magnitude = std::isfinite(min_pos) ? min_pos : 0.0;
    const bool has_zero = t.zero_fraction > 0.0;
    const bool all_zero = max_mag == 0.0;

    parallel_for(np, [&](std::size_t i) {
        const double p = p_grid[i];
        if (p == 0.0) {
            // 0^0 = 1 keeps the normalization exact; ln 0 = -inf enters the log moments.
            t.moments[i] = 1.0;
            t.ln_moments[i] = 0.0;
            CompensatedSum s1, s2;
            for (std::size_t j = 0; j < ens.size(); ++j) {
                if (!std::isfinite(logs[j])) continue;
                s1.add(ens.weights[j] * logs[j]);
                s2.add(ens.weights[j] * logs[j] * logs[j]);
            }
            const double l1 = has_zero ? -inf : s1.value();
            const double l2 = has_zero ? inf : s2.value();
            t.log_moments[i] = l1;
            t.log2_moments[i] = l2;
            t.mean_log[i] = l1;
            t.mean_log2[i] = l2;
            return;
        }
        if (all_zero || (p < 0.0 && has_zero)) {
            const double m = p < 0.0 ? inf : 0.0;
            t.moments[i] = m;
            t.ln_moments[i] = p < 0.0 ? inf : -inf;
            t.log_moments[i] = p < 0.0 ? -inf : 0.0;
            t.log2_moments[i] = p < 0.0 ? inf : 0.0;
            t.mean_log[i] = std::nan("");
            t.mean_log2[i] = std::nan("");
            return;
        }
        // Scale so the largest term is 1: by the max magnitude for p > 0, by the
        // smallest positive magnitude for p < 0.
        const double ln_scale = std::log(p > 0.0 ? max_mag : min_pos);
        CompensatedSum s0, s1, s2;
        for (std::size_t j = 0; j < ens.size(); ++j) {
            if (!std::isfinite(logs[j])) continue;
            const double g = ens.weights[j] * std::exp(p * (logs[j] - ln_scale));
            s0.add(g);
            s1.add(g * logs[j]);
            s2.add(g * logs[j] * logs[j]);
        }
        const double ln_s0 = std::log(s0.value());
        t.ln_moments[i] = ln_s0 + p * ln_scale;
        t.mean_log[i] = s1.value() / s0.value();
        t.mean_log2[i] = s2.value() / s0.value();
        const double m = std::exp(t.ln_moments[i]);
        t.moments[i] = m;
        t.log_moments[i] = m * t.mean_log[i];
        t.log2_moments[i] = m * t.mean_log2[i];
    });
    return t;
}

EffectiveDomain effective_domain(const MomentTable& tab) {
    EffectiveDomain d;
    std::size_t best_len = 0, best_first = 0;
    std::size_t i = 0;
    while (i < tab.size()) {
        if (!tab.finite(i)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < tab.size() && tab.finite(j + 1)) ++j;
        const std::size_t len = j - i + 1;
        if (len >= best_len) {
            best_len = len;
            best_first = i;
        }
        i = j + 1;
    }
    if (best_len == 0) return d;
    d.empty = false;
    d.first = best_first;
    d.last = best_first + best_len - 1;
    if (tab.zero_fraction > 0.0) {
        d.p_min = 0.0;
        d.p_min_infinite = false;
    } else {
        d.p_min = tab.p_grid[d.first];
        d.p_min_infinite = true;
    }
    d.p_max = tab.p_grid[d.last];
    d.p_max_infinite = tab.max_magnitude > 0.0;
    return d;
}

}  // namespace multifrac

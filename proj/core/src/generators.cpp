#include "multifrac/generators.hpp"

#include "multifrac/error.hpp"
#include "multifrac/numeric.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <limits>
#include <random>

namespace multifrac {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

std::array<double, 3> random_unit(std::mt19937_64& rng, std::size_t components) {
    std::array<double, 3> v{0, 0, 0};
    if (components == 1) {
        v[0] = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
        return v;
    }
    std::normal_distribution<double> g;
    double norm = 0.0;
    while (norm < 1e-12) {
        norm = 0.0;
        for (std::size_t c = 0; c < components; ++c) {
            v[c] = g(rng);
            norm += v[c] * v[c];
        }
        norm = std::sqrt(norm);
    }
    for (std::size_t c = 0; c < components; ++c) v[c] /= norm;
    return v;
}

struct Family {
    std::size_t cubes;
    double amplitude;
};

GridField place_cubes(int dims, std::size_t n, double ell, const std::vector<double>& dims_per_family,
                      const std::vector<double>& amplitudes, std::uint64_t seed, Placement* out) {
    if (dims != 1 && dims != 3) throw Error(ErrorKind::argument, "generator: dims must be 1 or 3");
    if (!(ell > 0.0 && ell <= 0.5)) throw Error(ErrorKind::scale, "generator: ell must lie in (0, 1/2]");
    const auto cells = static_cast<std::size_t>(std::llround(ell * static_cast<double>(n)));
    if (cells < 1) throw Error(ErrorKind::resolution, "generator: grid does not resolve ell");
    const double ell_eff = static_cast<double>(cells) / static_cast<double>(n);
    // Slot pitch 2*cells keeps cubes at least ell apart on every axis.
    const std::size_t per_axis = n / (2 * cells);
    std::size_t slots = per_axis;
    if (dims == 3) slots = per_axis * per_axis * per_axis;

    std::vector<Family> fam;
    std::size_t total = 0;
    for (std::size_t k = 0; k < dims_per_family.size(); ++k) {
        const double target = std::pow(ell_eff, 3.0 - dims_per_family[k]) / (2.0 * std::pow(ell_eff, dims));
        const auto count = static_cast<std::size_t>(std::llround(target));
        if (count == 0)
            throw Error(ErrorKind::capacity, "generator: family " + std::to_string(k) + " rounds to zero cubes");
        fam.push_back({count, amplitudes[k]});
        total += count;
    }
    if (total > slots)
        throw Error(ErrorKind::capacity, "generator: " + std::to_string(total) + " cubes exceed " +
                                             std::to_string(slots) + " separated slots");

    std::mt19937_64 rng(splitmix64(seed));
    std::vector<std::size_t> order(slots);
    for (std::size_t i = 0; i < slots; ++i) order[i] = i;
    for (std::size_t i = 0; i < total; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, slots - 1);
        std::swap(order[i], order[pick(rng)]);
    }

    const std::size_t comps = dims == 1 ? 1 : 3;
    GridField field(dims, n, comps);
    std::size_t next = 0;
    for (const auto& f : fam)
        for (std::size_t c = 0; c < f.cubes; ++c) {
            const std::size_t slot = order[next++];
            std::array<std::int64_t, 3> origin{0, 0, 0};
            if (dims == 1) {
                origin[0] = static_cast<std::int64_t>(slot * 2 * cells);
            } else {
                origin[0] = static_cast<std::int64_t>((slot / (per_axis * per_axis)) * 2 * cells);
                origin[1] = static_cast<std::int64_t>(((slot / per_axis) % per_axis) * 2 * cells);
                origin[2] = static_cast<std::int64_t>((slot % per_axis) * 2 * cells);
            }
            const auto dir = random_unit(rng, comps);
            const auto w = static_cast<std::int64_t>(cells);
            const std::int64_t wy = dims == 1 ? 1 : w, wz = dims == 1 ? 1 : w;
            for (std::int64_t a = 0; a < w; ++a)
                for (std::int64_t b = 0; b < wy; ++b)
                    for (std::int64_t z = 0; z < wz; ++z)
                        for (std::size_t cc = 0; cc < comps; ++cc)
                            field.at({origin[0] + a, origin[1] + b, origin[2] + z}, cc) = f.amplitude * dir[cc];
        }
    if (out) {
        out->cells_per_cube = cells;
        out->slots = slots;
        out->effective_ell = ell_eff;
        out->cubes_per_family.clear();
        for (const auto& f : fam) out->cubes_per_family.push_back(f.cubes);
    }
    return field;
}

bool in_upper_half(const std::array<int, 3>& k) {
    if (k[0] != 0) return k[0] > 0;
    if (k[1] != 0) return k[1] > 0;
    return k[2] > 0;
}

int rademacher_sign(std::uint64_t seed, std::size_t member, std::array<int, 3> k) {
    if (!in_upper_half(k)) k = {-k[0], -k[1], -k[2]};
    std::uint64_t h = splitmix64(seed ^ splitmix64(member + 0x51ed27ULL));
    for (int c : k) h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(c) + 0x10000));
    return (h >> 63) ? 1 : -1;
}

void validate_modes(const RademacherSpec& spec) {
    if (spec.dims != 1 && spec.dims != 3) throw Error(ErrorKind::argument, "rademacher: dims must be 1 or 3");
    if (spec.components < 1 || spec.components > 3) throw Error(ErrorKind::argument, "rademacher: 1..3 components");
    if (spec.modes.empty()) throw Error(ErrorKind::argument, "rademacher: no modes");
    std::map<std::array<int, 3>, const FourierMode*> index;
    const int half = static_cast<int>(spec.n / 2);
    for (const auto& m : spec.modes) {
        if (m.k == std::array<int, 3>{0, 0, 0}) throw Error(ErrorKind::argument, "rademacher: u_0 must vanish");
        if (spec.dims == 1 && (m.k[1] != 0 || m.k[2] != 0))
            throw Error(ErrorKind::argument, "rademacher: 1D modes must lie on the x axis");
        for (int c : m.k)
            if (std::abs(c) >= half) throw Error(ErrorKind::argument, "rademacher: mode at or beyond Nyquist");
        if (!index.emplace(m.k, &m).second) throw Error(ErrorKind::argument, "rademacher: duplicate mode");
    }
    for (const auto& m : spec.modes) {
        const auto it = index.find({-m.k[0], -m.k[1], -m.k[2]});
        if (it == index.end()) throw Error(ErrorKind::argument, "rademacher: amplitudes are not Hermitian");
        for (std::size_t c = 0; c < spec.components; ++c) {
            const auto a = m.u[c], b = std::conj(it->second->u[c]);
            if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
                throw Error(ErrorKind::argument, "rademacher: amplitudes are not Hermitian");
        }
    }
}

}  // namespace

double MonoFractalSpec::amplitude() const {
    if (U0 && epsilon) throw Error(ErrorKind::argument, "mono-fractal: give U0 or epsilon, not both");
    if (epsilon) return std::cbrt(*epsilon) * std::pow(ell, (D - 2.0) / 3.0);
    return U0 ? *U0 : std::pow(ell, (D - 2.0) / 3.0);
}

GridField gen_monofractal(const MonoFractalSpec& spec, Placement* placement) {
    if (!(spec.D >= 0.0 && spec.D <= 3.0)) throw Error(ErrorKind::argument, "mono-fractal: D must lie in [0, 3]");
    return place_cubes(spec.dims, spec.n, spec.ell, {spec.D}, {spec.amplitude()}, spec.seed, placement);
}

GridField gen_multifractal(const MultiFractalSpec& spec, Placement* placement) {
    if (spec.nodes.empty()) throw Error(ErrorKind::argument, "multi-fractal: no nodes");
    std::vector<double> dims, amps;
    for (std::size_t k = 0; k < spec.nodes.size(); ++k) {
        const auto& nd = spec.nodes[k];
        if (!(nd.dim >= 0.0 && nd.dim <= 3.0)) throw Error(ErrorKind::argument, "multi-fractal: node dimension outside [0, 3]");
        if (k > 0 && !(nd.h > spec.nodes[k - 1].h && nd.dim > spec.nodes[k - 1].dim))
            throw Error(ErrorKind::argument, "multi-fractal: nodes must increase in h and dimension");
        dims.push_back(nd.dim);
        amps.push_back(std::pow(spec.ell, nd.h));
    }
    return place_cubes(spec.dims, spec.n, spec.ell, dims, amps, spec.seed, placement);
}

GridField gen_rademacher_member(const RademacherSpec& spec, std::size_t member) {
    validate_modes(spec);
    const std::size_t n = spec.n;
    const std::size_t total = spec.dims == 1 ? n : n * n * n;
    GridField field(spec.dims, n, spec.components);
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    if (!buf) throw Error(ErrorKind::capacity, "rademacher: allocation failed");
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = spec.dims == 1
                   ? fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE)
                   : fftw_plan_dft_3d(static_cast<int>(n), static_cast<int>(n), static_cast<int>(n), buf, buf,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    const auto wrap = [n](int k) { return static_cast<std::size_t>((k % static_cast<int>(n) + static_cast<int>(n)) % static_cast<int>(n)); };
    double max_imag = 0.0, max_real = 0.0;
    for (std::size_t c = 0; c < spec.components; ++c) {
        for (std::size_t i = 0; i < total; ++i) buf[i][0] = buf[i][1] = 0.0;
        for (const auto& m : spec.modes) {
            const double theta = rademacher_sign(spec.seed, member, m.k);
            const std::size_t idx = spec.dims == 1 ? wrap(m.k[0]) : (wrap(m.k[0]) * n + wrap(m.k[1])) * n + wrap(m.k[2]);
            buf[idx][0] += theta * m.u[c].real();
            buf[idx][1] += theta * m.u[c].imag();
        }
        fftw_execute(plan);
        auto vals = field.values();
        for (std::size_t i = 0; i < total; ++i) {
            vals[i * spec.components + c] = buf[i][0];
            max_real = std::max(max_real, std::abs(buf[i][0]));
            max_imag = std::max(max_imag, std::abs(buf[i][1]));
        }
    }
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    if (max_imag > 1e-9 * std::max(1.0, max_real))
        throw Error(ErrorKind::internal_consistency, "rademacher: synthesized field is not real");
    return field;
}

std::vector<GridField> gen_rademacher(const RademacherSpec& spec) {
    if (spec.members == 0) throw Error(ErrorKind::argument, "rademacher: ensemble size must be positive");
    std::vector<GridField> out;
    out.reserve(spec.members);
    for (std::size_t m = 0; m < spec.members; ++m) out.push_back(gen_rademacher_member(spec, m));
    return out;
}

std::vector<FourierMode> band_limited_modes(int dims, std::size_t components, double k_min, double k_max,
                                            double slope, std::uint64_t seed) {
    if (!(k_min > 0.0 && k_max >= k_min)) throw Error(ErrorKind::argument, "band_limited_modes: bad band");
    std::mt19937_64 rng(splitmix64(seed));
    std::normal_distribution<double> g;
    std::vector<FourierMode> modes;
    const int K = static_cast<int>(std::floor(k_max));
    const int Ky = dims == 1 ? 0 : K;
    for (int a = -K; a <= K; ++a)
        for (int b = -Ky; b <= Ky; ++b)
            for (int c = -Ky; c <= Ky; ++c) {
                const std::array<int, 3> k{a, b, c};
                const double mag = std::sqrt(static_cast<double>(a * a + b * b + c * c));
                if (mag < k_min || mag > k_max || !in_upper_half(k)) continue;
                FourierMode m;
                m.k = k;
                double norm = 0.0;
                for (std::size_t cc = 0; cc < components; ++cc) {
                    m.u[cc] = {g(rng), g(rng)};
                    norm += std::norm(m.u[cc]);
                }
                const double scale = std::pow(mag, slope) / std::sqrt(norm);
                for (std::size_t cc = 0; cc < components; ++cc) m.u[cc] *= scale;
                FourierMode mirror;
                mirror.k = {-a, -b, -c};
                for (std::size_t cc = 0; cc < components; ++cc) mirror.u[cc] = std::conj(m.u[cc]);
                modes.push_back(m);
                modes.push_back(mirror);
            }
    return modes;
}

double ref_beta_zeta(double p, double D) { return 3.0 - D + p * (D - 2.0) / 3.0; }

double ref_beta_relation(double p, double D_p3) { return p / 3.0 + (3.0 - D_p3) * (1.0 - p / 3.0); }

double ref_kfamily_zeta(double p, std::span<const KNode> nodes) {
    if (nodes.empty()) throw Error(ErrorKind::argument, "ref_kfamily_zeta: no nodes");
    double z = std::numeric_limits<double>::infinity();
    for (const auto& nd : nodes) z = std::min(z, 3.0 + p * nd.h - nd.dim);
    return z;
}

std::vector<double> ref_kfamily_kinks(std::span<const KNode> nodes) {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
        out.push_back((nodes[k + 1].dim - nodes[k].dim) / (nodes[k + 1].h - nodes[k].h));
    return out;
}

RandomBounds ref_random_bounds(double p, double ell) {
    const double L = std::log(ell);
    const double lower = p / 3.0 + (-0.5 * std::log(std::numbers::pi) + p * std::numbers::ln2 + std::lgamma(0.5 * (p + 1.0))) / L;
    const double upper = p * (1.0 / 3.0 - 2.0 * std::numbers::ln2 / (3.0 * L));
    return {lower, upper};
}

double ref_khintchine_B(double p) {
    return std::exp(0.5 * p * std::numbers::ln2 + std::lgamma(0.5 * (p + 1.0))) / std::sqrt(std::numbers::pi);
}

double ref_random_Dp(double p, double ell) {
    const double a = 0.5 * (p + 1.0);
    return 3.0 - (-0.5 * std::log(std::numbers::pi) + std::lgamma(a) - 0.5 * p * digamma(a)) / std::log(ell);
}

double ref_random_lower_zeta1(double p, double ell) {
    return 1.0 / 3.0 + (std::numbers::ln2 + 0.5 * digamma(0.5 * (p + 1.0))) / std::log(ell);
}

double ref_random_lower_zeta2(double p, double ell) {
    return 0.25 * trigamma(0.5 * (p + 1.0)) / std::log(ell);
}

}  // namespace multifrac

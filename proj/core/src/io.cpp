#include "multifrac/io.hpp"

#include "multifrac/error.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace multifrac {

namespace {

static_assert(std::endian::native == std::endian::little, "field format assumes a little-endian host");

using nlohmann::ordered_json;

constexpr char magic[4] = {'M', 'F', 'R', 'C'};
constexpr std::size_t header_bytes = 4 + 4 * 4;

template <class T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t offset) {
    T v;
    std::memcpy(&v, in.data() + offset, sizeof(T));
    return v;
}

// JSON has no inf/nan; they become null.
ordered_json num(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json nums(const std::vector<double>& xs) {
    auto a = ordered_json::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json endpoint_record(const EndpointClass& e) {
    return ordered_json{{"end", to_string(e.end)},
                        {"case", e.label},
                        {"p_finite", e.p_finite},
                        {"h_finite", e.h_finite},
                        {"dprime_finite", e.dprime_finite},
                        {"p_bound", num(e.p_bound)},
                        {"h_value", num(e.h_value)},
                        {"end_curvature", num(e.end_curvature)},
                        {"k41_consistent", e.k41_consistent}};
}

ordered_json fit_record(const FitResult& f) {
    return ordered_json{{"exponent", num(f.exponent)},
                        {"prefactor", num(f.prefactor)},
                        {"range", {num(f.lo), num(f.hi)}},
                        {"points", f.points},
                        {"residual", num(f.residual)},
                        {"power_law", f.power_law}};
}

}  // namespace

std::string encode_field(const GridField& field) {
    std::string out;
    const auto vals = field.values();
    out.reserve(header_bytes + vals.size() * sizeof(double));
    out.append(magic, 4);
    put<std::uint32_t>(out, field_format_version);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.dims()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.n()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.components()));
    out.append(reinterpret_cast<const char*>(vals.data()), vals.size() * sizeof(double));
    return out;
}

GridField decode_field(const std::string& bytes) {
    if (bytes.size() < header_bytes || std::memcmp(bytes.data(), magic, 4) != 0)
        throw Error(ErrorKind::io, "field: missing MFRC header");
    const auto version = get<std::uint32_t>(bytes, 4);
    if (version != field_format_version) throw Error(ErrorKind::io, "field: unsupported version " + std::to_string(version));
    const auto dims = get<std::uint32_t>(bytes, 8);
    const auto n = get<std::uint32_t>(bytes, 12);
    const auto comps = get<std::uint32_t>(bytes, 16);
    if ((dims != 1 && dims != 3) || n == 0 || comps == 0) throw Error(ErrorKind::io, "field: bad header values");
    GridField field(static_cast<int>(dims), n, comps);
    auto vals = field.values();
    if (bytes.size() != header_bytes + vals.size() * sizeof(double))
        throw Error(ErrorKind::io, "field: payload size does not match header");
    std::memcpy(vals.data(), bytes.data() + header_bytes, vals.size() * sizeof(double));
    field.validate();
    return field;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorKind::io, "write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::io, "rename to " + path.string() + " failed: " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_field(const std::filesystem::path& path, const GridField& field) {
    write_file_atomic(path, encode_field(field));
}

GridField read_field(const std::filesystem::path& path) { return decode_field(read_file(path)); }

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string moments_csv(const MomentTable& tab) {
    std::string out = "p,moment,log_moment,log2_moment,finite_flag\n";
    for (std::size_t i = 0; i < tab.size(); ++i)
        out += format_double(tab.p_grid[i]) + "," + format_double(tab.moments[i]) + "," +
               format_double(tab.log_moments[i]) + "," + format_double(tab.log2_moments[i]) + "," +
               (tab.finite(i) ? "1" : "0") + "\n";
    return out;
}

std::string profile_csv(const ScalingProfile& prof) {
    std::string out = "p,zeta,zeta1,zeta2\n";
    for (std::size_t i = 0; i < prof.size(); ++i)
        out += format_double(prof.p_grid[i]) + "," + format_double(prof.zeta[i]) + "," +
               format_double(prof.zeta1[i]) + "," + format_double(prof.zeta2[i]) + "\n";
    return out;
}

std::string mfr_csv(const MfrSpectrum& spec) {
    std::string out = "h,d_h,argmin_p,outside\n";
    for (std::size_t i = 0; i < spec.size(); ++i)
        out += format_double(spec.h_grid[i]) + "," + format_double(spec.d[i]) + "," +
               format_double(spec.argmin_p[i]) + "," + (spec.outside[i] ? "1" : "0") + "\n";
    return out;
}

std::string spectrum_csv(const SpectrumCurve& spec) {
    std::string out = "kappa,E,fit_flag\n";
    for (std::size_t i = 0; i < spec.kappa.size(); ++i) {
        const bool in_fit = spec.fit && spec.kappa[i] >= spec.fit->lo && spec.kappa[i] <= spec.fit->hi;
        out += format_double(spec.kappa[i]) + "," + format_double(spec.E[i]) + "," + (in_fit ? "1" : "0") + "\n";
    }
    return out;
}

std::string structure_csv(const StructureCurve& curve) {
    std::string out = "ell,s2\n";
    for (std::size_t i = 0; i < curve.ell.size(); ++i)
        out += format_double(curve.ell[i]) + "," + format_double(curve.s2[i]) + "\n";
    return out;
}

std::string volumetric_csv(const VolumetricReport& rep) {
    std::string out = "p,V_p,D_p,s_p,I_p\n";
    for (std::size_t i = 0; i < rep.p_grid.size(); ++i)
        out += format_double(rep.p_grid[i]) + "," + format_double(rep.V_p[i]) + "," + format_double(rep.D_p[i]) +
               "," + format_double(rep.s_p[i]) + "," + format_double(rep.I_p[i]) + "\n";
    return out;
}

std::string volumetric_json(const VolumetricReport& rep) {
    ordered_json j{{"ell", num(rep.ell)},
                   {"p_grid", nums(rep.p_grid)},
                   {"V_qp", nums(rep.V_qp)},
                   {"D_qp", nums(rep.D_qp)},
                   {"s_qp", nums(rep.s_qp)},
                   {"V_p", nums(rep.V_p)},
                   {"D_p", nums(rep.D_p)},
                   {"s_p", nums(rep.s_p)},
                   {"I_p", nums(rep.I_p)},
                   {"flatness", num(rep.flatness)},
                   {"tolerances", {{"consistency", rep.consistency_tol}, {"probe", rep.probe_tol}}}};
    return dump(j);
}

std::string profile_json(const ScalingProfile& prof) {
    ordered_json j{{"ell", num(prof.ell)},
                   {"p_grid", nums(prof.p_grid)},
                   {"zeta", nums(prof.zeta)},
                   {"zeta1", nums(prof.zeta1)},
                   {"zeta2", nums(prof.zeta2)},
                   {"p_min", num(prof.p_min)},
                   {"p_max", num(prof.p_max)},
                   {"p_min_infinite", prof.p_min_infinite},
                   {"p_max_infinite", prof.p_max_infinite}};
    return dump(j);
}

std::string endpoints_json(const std::vector<EndpointClass>& ends) {
    auto a = ordered_json::array();
    for (const auto& e : ends) a.push_back(endpoint_record(e));
    return dump(a);
}

std::string mfr_json(const MfrSpectrum& spec, const std::vector<EndpointClass>& ends) {
    auto e = ordered_json::array();
    for (const auto& x : ends) e.push_back(endpoint_record(x));
    std::vector<double> outside;
    for (bool b : spec.outside) outside.push_back(b ? 1.0 : 0.0);
    ordered_json j{{"h", nums(spec.h_grid)},
                   {"d_h", nums(spec.d)},
                   {"argmin_p", nums(spec.argmin_p)},
                   {"outside", nums(outside)},
                   {"h_min", num(spec.h_min)},
                   {"h_max", num(spec.h_max)},
                   {"peak_h", num(spec.peak_h)},
                   {"peak_d", num(spec.peak_d)},
                   {"endpoints", e}};
    return dump(j);
}

std::string fit_json(const FitResult& fit) { return dump(fit_record(fit)); }

std::string spectrum_json(const SpectrumCurve& spec) {
    ordered_json j{{"kappa", nums(spec.kappa)},
                   {"E", nums(spec.E)},
                   {"negative_noise", num(spec.negative_noise)},
                   {"fit", spec.fit ? fit_record(*spec.fit) : ordered_json(nullptr)}};
    return dump(j);
}

std::string concentration_json(const ConcentrationReport& rep) {
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : rep.params) params[k] = num(v);
    ordered_json j{{"lemma", rep.lemma},
                   {"params", params},
                   {"lhs", num(rep.lhs)},
                   {"rhs", num(rep.rhs)},
                   {"margin", num(rep.margin)},
                   {"pass", rep.pass},
                   {"threshold", num(rep.threshold)},
                   {"set_measure", num(rep.set_measure)},
                   {"target_measure", num(rep.target_measure)},
                   {"captured_fraction", num(rep.captured_fraction)},
                   {"bound_constant", num(rep.bound_constant)},
                   {"sliced", rep.sliced},
                   {"indices", rep.indices()}};
    return dump(j);
}

std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(const std::string& text) {
    std::vector<double> a, b;
    std::istringstream in(text);
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorKind::io, "csv line " + std::to_string(lineno) + ": expected two columns");
        const auto c2 = line.find(',', comma + 1);
        const std::string x = line.substr(0, comma);
        const std::string y = line.substr(comma + 1, c2 == std::string::npos ? std::string::npos : c2 - comma - 1);
        char* end = nullptr;
        const double vx = std::strtod(x.c_str(), &end);
        if (end == x.c_str()) {
            if (a.empty() && lineno == 1) continue;  // header
            throw Error(ErrorKind::io, "csv line " + std::to_string(lineno) + ": not a number");
        }
        char* end2 = nullptr;
        const double vy = std::strtod(y.c_str(), &end2);
        if (end2 == y.c_str()) throw Error(ErrorKind::io, "csv line " + std::to_string(lineno) + ": not a number");
        a.push_back(vx);
        b.push_back(vy);
    }
    return {a, b};
}

}  // namespace multifrac

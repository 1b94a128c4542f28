#include "multifrac/error.hpp"
#include "multifrac/generators.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace multifrac {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(std::size_t line, const std::string& what) {
    throw Error(ErrorKind::argument, "spec line " + std::to_string(line) + ": " + what);
}

// Accepts decimals, "a/b" fractions and "2^-8" powers.
double parse_real(const std::string& tok, std::size_t line) {
    const auto try_plain = [&](const std::string& s) -> double {
        double v = 0.0;
        const auto* first = s.data();
        const auto* last = s.data() + s.size();
        const auto r = std::from_chars(first, last, v);
        if (r.ec != std::errc{} || r.ptr != last) bad(line, "not a number: '" + tok + "'");
        return v;
    };
    if (const auto slash = tok.find('/'); slash != std::string::npos) {
        const double den = try_plain(trim(tok.substr(slash + 1)));
        if (den == 0.0) bad(line, "zero denominator");
        return try_plain(trim(tok.substr(0, slash))) / den;
    }
    if (const auto caret = tok.find('^'); caret != std::string::npos)
        return std::pow(try_plain(trim(tok.substr(0, caret))), try_plain(trim(tok.substr(caret + 1))));
    const double v = try_plain(tok);
    if (!std::isfinite(v)) bad(line, "non-finite value");
    return v;
}

std::uint64_t parse_uint(const std::string& tok, std::size_t line) {
    // Integer powers such as 2^20 are accepted for sizes.
    if (const auto caret = tok.find('^'); caret != std::string::npos) {
        const auto base = parse_uint(trim(tok.substr(0, caret)), line);
        const auto exp = parse_uint(trim(tok.substr(caret + 1)), line);
        std::uint64_t v = 1;
        for (std::uint64_t i = 0; i < exp; ++i) {
            if (base != 0 && v > std::numeric_limits<std::uint64_t>::max() / base) bad(line, "integer overflow: '" + tok + "'");
            v *= base;
        }
        return v;
    }
    std::uint64_t v = 0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size()) bad(line, "not a non-negative integer: '" + tok + "'");
    return v;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

}  // namespace

ParsedSpec parse_generator_spec(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<std::size_t> lines;
    std::istringstream in(text);
    std::size_t lineno = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        const auto line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) bad(lineno, "expected 'key = value'");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) bad(lineno, "empty key or value");
        entries.emplace_back(std::move(key), std::move(value));
        lines.push_back(lineno);
    }

    std::string kind;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].first == "kind") {
            if (!kind.empty()) bad(lines[i], "kind given twice");
            kind = entries[i].second;
        }
    if (kind.empty()) throw Error(ErrorKind::argument, "spec: missing 'kind'");

    static const std::set<std::string> repeatable{"node", "mode"};
    std::set<std::string> seen;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (!repeatable.contains(entries[i].first) && !seen.insert(entries[i].first).second)
            bad(lines[i], "duplicate key '" + entries[i].first + "'");

    const auto common = [&](auto& spec, const std::string& key, const std::string& val, std::size_t ln) {
        if (key == "dims") {
            const auto d = parse_uint(val, ln);
            if (d != 1 && d != 3) bad(ln, "dims must be 1 or 3");
            spec.dims = static_cast<int>(d);
        } else if (key == "n") {
            spec.n = parse_uint(val, ln);
            if (spec.n < 2) bad(ln, "n must be at least 2");
        } else if (key == "seed") {
            spec.seed = parse_uint(val, ln);
        } else {
            return false;
        }
        return true;
    };

    if (kind == "monofractal") {
        MonoFractalSpec s;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& [k, v] = entries[i];
            if (k == "kind" || common(s, k, v, lines[i])) continue;
            if (k == "ell") s.ell = parse_real(v, lines[i]);
            else if (k == "D") s.D = parse_real(v, lines[i]);
            else if (k == "U0") s.U0 = parse_real(v, lines[i]);
            else if (k == "epsilon") s.epsilon = parse_real(v, lines[i]);
            else bad(lines[i], "unknown key '" + k + "' for monofractal");
        }
        if (s.U0 && s.epsilon) throw Error(ErrorKind::argument, "spec: give U0 or epsilon, not both");
        return {s, entries};
    }
    if (kind == "multifractal") {
        MultiFractalSpec s;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& [k, v] = entries[i];
            if (k == "kind" || common(s, k, v, lines[i])) continue;
            if (k == "ell") {
                s.ell = parse_real(v, lines[i]);
            } else if (k == "node") {
                const auto t = split_ws(v);
                if (t.size() != 2) bad(lines[i], "node takes 'h dim'");
                s.nodes.push_back({parse_real(t[0], lines[i]), parse_real(t[1], lines[i])});
            } else {
                bad(lines[i], "unknown key '" + k + "' for multifractal");
            }
        }
        if (s.nodes.empty()) throw Error(ErrorKind::argument, "spec: multifractal needs at least one node");
        return {s, entries};
    }
    if (kind == "rademacher") {
        RademacherSpec s;
        std::optional<double> k_min, k_max;
        double slope = -11.0 / 6.0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& [k, v] = entries[i];
            if (k == "kind" || common(s, k, v, lines[i])) continue;
            if (k == "components") {
                s.components = parse_uint(v, lines[i]);
            } else if (k == "members") {
                s.members = parse_uint(v, lines[i]);
            } else if (k == "k_min") {
                k_min = parse_real(v, lines[i]);
            } else if (k == "k_max") {
                k_max = parse_real(v, lines[i]);
            } else if (k == "slope") {
                slope = parse_real(v, lines[i]);
            } else if (k == "mode") {
                // kx ky kz then re/im pairs, one per component
                const auto t = split_ws(v);
                if (t.size() < 5 || (t.size() - 3) % 2 != 0 || t.size() > 9)
                    bad(lines[i], "mode takes 'kx ky kz re im [re im [re im]]'");
                FourierMode m;
                for (int a = 0; a < 3; ++a) m.k[a] = static_cast<int>(std::lround(parse_real(t[a], lines[i])));
                for (std::size_t c = 0; 3 + 2 * c < t.size(); ++c)
                    m.u[c] = {parse_real(t[3 + 2 * c], lines[i]), parse_real(t[4 + 2 * c], lines[i])};
                s.modes.push_back(m);
            } else {
                bad(lines[i], "unknown key '" + k + "' for rademacher");
            }
        }
        if (k_min.has_value() != k_max.has_value())
            throw Error(ErrorKind::argument, "spec: give both k_min and k_max");
        if (k_max) {
            if (!s.modes.empty()) throw Error(ErrorKind::argument, "spec: explicit modes and a band are exclusive");
            s.modes = band_limited_modes(s.dims, s.components, *k_min, *k_max, slope, s.seed ^ 0x9e3779b9ULL);
        }
        if (s.modes.empty()) throw Error(ErrorKind::argument, "spec: rademacher needs modes or a band");
        return {s, entries};
    }
    throw Error(ErrorKind::argument, "spec: unknown kind '" + kind + "'");
}

}  // namespace multifrac

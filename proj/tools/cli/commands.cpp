#include "commands.hpp"

#include "acceptance.hpp"

#include <multifrac/error.hpp>
#include <multifrac/generators.hpp>
#include <multifrac/io.hpp>
#include <multifrac/mfr.hpp>
#include <multifrac/numeric.hpp>
#include <multifrac/scaling.hpp>
#include <multifrac/spectrum.hpp>
#include <multifrac/volumetrics.hpp>

#include <json.hpp>
#include <sodium.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>

namespace multifrac::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

ordered_json file_record(const fs::path& path, const std::string& bytes) {
    return {{"path", path.filename().string()}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}};
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
}

std::vector<Direction> parse_directions(const std::string& spec, int dims, std::uint64_t seed) {
    if (spec == "axes14") return default_directions(dims);
    if (spec == "axes") return axis_directions(dims);
    if (spec.rfind("random:", 0) == 0) {
        const auto count = std::stoul(spec.substr(7));
        if (count == 0) throw Error(ErrorKind::argument, "random directions need a positive count");
        return random_directions(dims, count, seed);
    }
    throw Error(ErrorKind::argument, "unknown direction set '" + spec + "' (axes14|axes|random:M)");
}

std::string join_name(const std::string& stem, std::size_t ell_index, const std::string& what, const std::string& ext) {
    return stem + "_l" + std::to_string(ell_index) + "_" + what + "." + ext;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    if (sodium_init() < 0) throw Error(ErrorKind::internal_consistency, "libsodium failed to initialize");
    unsigned char digest[crypto_hash_sha256_BYTES];
    crypto_hash_sha256(digest, reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
    std::string hex;
    char buf[3];
    for (unsigned char c : digest) {
        std::snprintf(buf, sizeof buf, "%02x", c);
        hex += buf;
    }
    return hex;
}

int cmd_generate(const GenerateConfig& cfg) {
    auto parsed = parse_generator_spec(read_file(cfg.spec));
    ensure_dir(cfg.out);
    ordered_json echo = ordered_json::array();
    for (const auto& [k, v] : parsed.entries) echo.push_back({k, v});
    ordered_json manifest{{"command", "generate"}, {"spec_file", cfg.spec.filename().string()}, {"spec", echo}};
    ordered_json files = ordered_json::array();

    const auto emit = [&](const std::string& name, const GridField& field) {
        const auto bytes = encode_field(field);
        write_file_atomic(cfg.out / name, bytes);
        files.push_back(file_record(cfg.out / name, bytes));
    };

    std::visit(
        [&](auto spec) {
            using T = decltype(spec);
            if (cfg.seed) spec.seed = *cfg.seed;
            ordered_json eff{{"dims", spec.dims}, {"n", spec.n}, {"seed", spec.seed}};
            if constexpr (std::is_same_v<T, RademacherSpec>) {
                eff["kind"] = "rademacher";
                eff["components"] = spec.components;
                eff["members"] = spec.members;
                eff["modes"] = spec.modes.size();
                char name[64];
                for (std::size_t m = 0; m < spec.members; ++m) {
                    std::snprintf(name, sizeof name, "member_%04zu.mfrc", m);
                    emit(name, gen_rademacher_member(spec, m));
                }
            } else {
                Placement placement;
                GridField field = [&] {
                    if constexpr (std::is_same_v<T, MonoFractalSpec>) {
                        eff["kind"] = "monofractal";
                        eff["D"] = spec.D;
                        eff["U0"] = spec.amplitude();
                        return gen_monofractal(spec, &placement);
                    } else {
                        eff["kind"] = "multifractal";
                        ordered_json nodes = ordered_json::array();
                        for (const auto& nd : spec.nodes) nodes.push_back({{"h", nd.h}, {"dim", nd.dim}});
                        eff["nodes"] = nodes;
                        std::vector<double> kinks = ref_kfamily_kinks(spec.nodes);
                        eff["kinks"] = kinks;
                        return gen_multifractal(spec, &placement);
                    }
                }();
                eff["ell"] = spec.ell;
                eff["effective_ell"] = placement.effective_ell;
                eff["cells_per_cube"] = placement.cells_per_cube;
                eff["slots"] = placement.slots;
                eff["cubes_per_family"] = placement.cubes_per_family;
                emit("field.mfrc", field);
            }
            manifest["effective"] = eff;
        },
        parsed.spec);
    manifest["files"] = files;
    write_file_atomic(cfg.out / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << files.size() << " field file(s) and manifest.json to " << cfg.out.string() << "\n";
    return 0;
}

int cmd_analyze(const AnalyzeConfig& cfg) {
    if (cfg.inputs.empty()) throw Error(ErrorKind::argument, "analyze needs at least one --input");
    if (cfg.ells.empty()) throw Error(ErrorKind::argument, "analyze needs at least one --ell");
    if (!(cfg.p_step > 0.0) || !(cfg.p_max > cfg.p_min)) throw Error(ErrorKind::argument, "p-grid must be strictly increasing");
    if (cfg.format != "csv" && cfg.format != "json") throw Error(ErrorKind::argument, "format must be csv or json");
    for (double l : cfg.ells)
        if (!(l > 0.0 && l <= 0.5)) throw Error(ErrorKind::argument, "ell values must lie in (0, 1/2]");
    ensure_dir(cfg.out);
    const auto grid = arange(cfg.p_min, cfg.p_max, cfg.p_step);
    ordered_json manifest{{"command", "analyze"},
                          {"p_grid", {{"min", cfg.p_min}, {"max", cfg.p_max}, {"step", cfg.p_step}}},
                          {"ell", cfg.ells},
                          {"directions", cfg.directions},
                          {"seed", cfg.seed},
                          {"stride", cfg.stride},
                          {"format", cfg.format}};
    ordered_json files = ordered_json::array();
    const auto emit = [&](const std::string& name, const std::string& content) {
        write_file_atomic(cfg.out / name, content);
        files.push_back(file_record(cfg.out / name, content));
    };

    for (const auto& input : cfg.inputs) {
        const auto field = read_field(input);
        const auto dirs = parse_directions(cfg.directions, field.dims(), cfg.seed);
        const std::string stem = input.stem().string();
        for (std::size_t li = 0; li < cfg.ells.size(); ++li) {
            const double ell = cfg.ells[li];
            const auto ens = increments(field, ell, dirs, cfg.stride);
            const auto tab = moments(ens, grid);
            emit(join_name(stem, li, "moments", "csv"), moments_csv(tab));
            if (tab.zero_fraction >= 1.0) {
                // No increments at all: the K41 degenerate end, nothing to fit.
                ordered_json deg{{"ell", ell}, {"degenerate", true}, {"reason", "all increments vanish"},
                                 {"endpoints", {{{"end", "max"}, {"case", 5}}, {{"end", "min"}, {"case", 5}}}}};
                emit(join_name(stem, li, "report", "json"), deg.dump(2) + "\n");
                continue;
            }
            const auto prof = zeta(tab);
            const auto ends = classify_endpoints(prof);
            std::vector<double> h_grid(prof.zeta1.rbegin(), prof.zeta1.rend());
            h_grid.erase(std::unique(h_grid.begin(), h_grid.end()), h_grid.end());
            const auto mfr = legendre(prof, h_grid);
            const auto vol = volumetric_report(tab);
            if (cfg.format == "csv") {
                emit(join_name(stem, li, "profile", "csv"), profile_csv(prof));
                emit(join_name(stem, li, "volumetrics", "csv"), volumetric_csv(vol));
                emit(join_name(stem, li, "mfr", "csv"), mfr_csv(mfr));
                emit(join_name(stem, li, "endpoints", "json"), endpoints_json(ends));
            } else {
                emit(join_name(stem, li, "profile", "json"), profile_json(prof));
                emit(join_name(stem, li, "volumetrics", "json"), volumetric_json(vol));
                emit(join_name(stem, li, "mfr", "json"), mfr_json(mfr, ends));
            }
        }
    }
    manifest["files"] = files;
    write_file_atomic(cfg.out / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << files.size() << " report file(s) to " << cfg.out.string() << "\n";
    return 0;
}

int cmd_spectrum(const SpectrumConfig& cfg) {
    if (cfg.format != "csv" && cfg.format != "json") throw Error(ErrorKind::argument, "format must be csv or json");
    ensure_dir(cfg.out);
    const std::string bytes = read_file(cfg.input);
    SpectrumCurve spec;
    ordered_json manifest{{"command", "spectrum"}, {"input", cfg.input.filename().string()}};
    std::optional<std::pair<double, double>> band;
    if (cfg.fit_lo && cfg.fit_hi) band = std::pair{*cfg.fit_lo, *cfg.fit_hi};
    if (bytes.rfind("MFRC", 0) == 0) {
        const auto field = decode_field(bytes);
        // Band given in kappa units on the command line; the field route takes |k|.
        std::optional<std::pair<double, double>> kband;
        if (band) kband = std::pair{band->first / (2.0 * M_PI), band->second / (2.0 * M_PI)};
        spec = spectrum_from_field(field, 0.0, kband);
        manifest["route"] = "field";
    } else {
        if (!(cfg.energy > 0.0)) throw Error(ErrorKind::argument, "S2 input needs --energy > 0");
        if (!(cfg.kappa_max > cfg.kappa_min && cfg.kappa_min > 0.0) || cfg.kappa_count < 2)
            throw Error(ErrorKind::argument, "bad kappa grid");
        const auto [ell, s2] = read_two_column_csv(bytes);
        const auto corr = correlation_from_s2(ell, s2, cfg.energy);
        spec = spectrum_from_correlation(corr, logspace(cfg.kappa_min, cfg.kappa_max, cfg.kappa_count));
        const auto b = band.value_or(std::pair{cfg.kappa_min * 8.0, cfg.kappa_min * 80.0});
        try {
            spec.fit = slope_fit(spec.kappa, spec.E, b.first, b.second);
        } catch (const Error& e) {
            std::cerr << "warning: " << e.what() << "\n";
        }
        manifest["route"] = "s2";
        manifest["energy"] = cfg.energy;
        manifest["kappa"] = {{"min", cfg.kappa_min}, {"max", cfg.kappa_max}, {"count", cfg.kappa_count}};
    }
    ordered_json files = ordered_json::array();
    const auto emit = [&](const std::string& name, const std::string& content) {
        write_file_atomic(cfg.out / name, content);
        files.push_back(file_record(cfg.out / name, content));
    };
    if (cfg.format == "csv") emit("spectrum.csv", spectrum_csv(spec));
    else emit("spectrum.json", spectrum_json(spec));
    if (spec.fit) emit("fit.json", fit_json(*spec.fit));
    manifest["files"] = files;
    write_file_atomic(cfg.out / "manifest.json", manifest.dump(2) + "\n");
    if (spec.fit)
        std::cout << "fitted exponent " << format_double(spec.fit->exponent) << " on [" << format_double(spec.fit->lo)
                  << ", " << format_double(spec.fit->hi) << "]\n";
    return 0;
}

int cmd_verify(const VerifyConfig& cfg) {
    acceptance::Options opts;
    opts.tolerance_scale = cfg.tolerance_scale;
    opts.corrupt_moments = cfg.corrupt_moments;
    opts.only.insert(cfg.only.begin(), cfg.only.end());
    opts.seed = cfg.seed;
    const auto results = acceptance::run_suite(opts, &std::cout);
    const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    if (cfg.out) write_file_atomic(*cfg.out, acceptance::suite_json(results));
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (all ? "all criteria passed" : std::to_string(failed) + " criterion/criteria failed") << "\n";
    return all ? 0 : 1;
}

}  // namespace multifrac::cli

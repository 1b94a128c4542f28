#include "commands.hpp"

#include <multifrac/error.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace multifrac::cli;
    CLI::App app{"multifrac: multifractal scaling, volumetric and spectral analysis of synthetic fields"};
    app.set_config("--config", "", "TOML/INI file with option defaults (flags take precedence)");
    app.require_subcommand(1);
    app.failure_message([](const CLI::App*, const CLI::Error& e) { return "error: usage: " + std::string(e.what()) + "\n"; });

    GenerateConfig gen;
    std::uint64_t gen_seed = 0;
    auto* g = app.add_subcommand("generate", "Generate fields from a spec file");
    g->add_option("--spec", gen.spec, "Generator spec file")->required()->check(CLI::ExistingFile);
    g->add_option("--out", gen.out, "Output directory")->required();
    auto* seed_opt = g->add_option("--seed", gen_seed, "Override the spec seed");

    AnalyzeConfig an;
    auto* a = app.add_subcommand("analyze", "Scaling, volumetric and spectrum reports for field files");
    a->add_option("--input,--spec", an.inputs, "Field file(s) (.mfrc)")->required()->check(CLI::ExistingFile);
    a->add_option("--out", an.out, "Output directory")->required();
    a->add_option("--p-min", an.p_min, "Smallest order")->capture_default_str();
    a->add_option("--p-max", an.p_max, "Largest order")->capture_default_str();
    a->add_option("--p-step", an.p_step, "Order step")->capture_default_str();
    a->add_option("--ell", an.ells, "Scale (repeatable)")->required();
    a->add_option("--directions", an.directions, "axes14 | axes | random:M")->capture_default_str();
    a->add_option("--seed", an.seed, "Seed for random directions")->capture_default_str();
    a->add_option("--stride", an.stride, "Base-point stride")->capture_default_str();
    a->add_option("--format", an.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    SpectrumConfig sp;
    double fit_lo = 0.0, fit_hi = 0.0;
    auto* s = app.add_subcommand("spectrum", "Energy spectrum from a field file or an S2 CSV");
    s->add_option("--input,--spec", sp.input, "Field file or (ell, S2) CSV")->required()->check(CLI::ExistingFile);
    s->add_option("--out", sp.out, "Output directory")->required();
    s->add_option("--energy", sp.energy, "Total energy Gamma(0) for S2 input");
    s->add_option("--kappa-min", sp.kappa_min)->capture_default_str();
    s->add_option("--kappa-max", sp.kappa_max)->capture_default_str();
    s->add_option("--kappa-count", sp.kappa_count)->capture_default_str();
    auto* lo_opt = s->add_option("--fit-lo", fit_lo, "Fit band lower end (kappa)");
    auto* hi_opt = s->add_option("--fit-hi", fit_hi, "Fit band upper end (kappa)");
    s->add_option("--format", sp.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    VerifyConfig ver;
    std::string out_path;
    auto* v = app.add_subcommand("verify", "Run the acceptance suite");
    v->add_option("--tolerance-scale", ver.tolerance_scale, "Multiply all tolerances")->capture_default_str();
    v->add_flag("--corrupt-moments", ver.corrupt_moments, "Perturb moments (negative test)");
    v->add_option("--only", ver.only, "Criterion number(s) to run")->check(CLI::Range(1, 9));
    v->add_option("--seed", ver.seed)->capture_default_str();
    auto* out_opt = v->add_option("--out", out_path, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*g) {
            if (*seed_opt) gen.seed = gen_seed;
            return cmd_generate(gen);
        }
        if (*a) return cmd_analyze(an);
        if (*s) {
            if (*lo_opt) sp.fit_lo = fit_lo;
            if (*hi_opt) sp.fit_hi = fit_hi;
            return cmd_spectrum(sp);
        }
        if (*out_opt) ver.out = out_path;
        return cmd_verify(ver);
    } catch (const multifrac::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 4;
    }
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace multifrac::cli {

struct GenerateConfig {
    std::filesystem::path spec;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
};

struct AnalyzeConfig {
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path out;
    double p_min = -2.0;
    double p_max = 8.0;
    double p_step = 0.1;
    std::vector<double> ells;
    std::string directions = "axes14";  // axes14 | axes | random:M
    std::uint64_t seed = 1;
    std::size_t stride = 1;
    std::string format = "csv";
};

struct SpectrumConfig {
    std::filesystem::path input;  // .mfrc field or two-column (ell, S2) CSV
    std::filesystem::path out;
    double energy = 0.0;          // required for S2 input
    double kappa_min = 1.0;
    double kappa_max = 1000.0;
    std::size_t kappa_count = 200;
    std::optional<double> fit_lo;
    std::optional<double> fit_hi;
    std::string format = "csv";
};

struct VerifyConfig {
    double tolerance_scale = 1.0;
    bool corrupt_moments = false;
    std::vector<int> only;
    std::optional<std::filesystem::path> out;
    std::uint64_t seed = 20240611;
};

int cmd_generate(const GenerateConfig& cfg);
int cmd_analyze(const AnalyzeConfig& cfg);
int cmd_spectrum(const SpectrumConfig& cfg);
int cmd_verify(const VerifyConfig& cfg);

std::string sha256_hex(const std::string& bytes);

}  // namespace multifrac::cli

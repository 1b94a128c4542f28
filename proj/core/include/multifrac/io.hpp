#pragma once

#include "multifrac/concentration.hpp"
#include "multifrac/ensemble.hpp"
#include "multifrac/mfr.hpp"
#include "multifrac/scaling.hpp"
#include "multifrac/spectrum.hpp"
#include "multifrac/volumetrics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace multifrac {

inline constexpr std::uint32_t field_format_version = 1;

// Little-endian "MFRC", u32 version/dims/n/components, then row-major f64 values.
std::string encode_field(const GridField& field);
GridField decode_field(const std::string& bytes);
void write_field(const std::filesystem::path& path, const GridField& field);
GridField read_field(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// 17 significant digits; inf/nan spelled as such.
std::string format_double(double x);

std::string moments_csv(const MomentTable& tab);
std::string profile_csv(const ScalingProfile& prof);
std::string mfr_csv(const MfrSpectrum& spec);
std::string spectrum_csv(const SpectrumCurve& spec);
std::string structure_csv(const StructureCurve& curve);
std::string volumetric_csv(const VolumetricReport& rep);

std::string volumetric_json(const VolumetricReport& rep);
std::string profile_json(const ScalingProfile& prof);
std::string endpoints_json(const std::vector<EndpointClass>& ends);
std::string mfr_json(const MfrSpectrum& spec, const std::vector<EndpointClass>& ends);
std::string fit_json(const FitResult& fit);
std::string spectrum_json(const SpectrumCurve& spec);
std::string concentration_json(const ConcentrationReport& rep);

// Two numeric columns (header optional); returns the columns.
std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(const std::string& text);

}  // namespace multifrac

#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace multifrac::acceptance {

struct Options {
    // Multiplies every pinned tolerance; values below 1 tighten the suite.
    double tolerance_scale = 1.0;
    // Perturbs the plain moment column in the identity suite by 1e-6 relative.
    bool corrupt_moments = false;
    std::set<int> only;  // empty: all criteria
    std::uint64_t seed = 20240611;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    std::vector<std::pair<std::string, double>> metrics;
};

inline constexpr int criterion_count = 9;

CriterionResult run_criterion(int id, const Options& opts);
// Runs the selected criteria in order; prints one line per criterion to progress when given.
std::vector<CriterionResult> run_suite(const Options& opts, std::ostream* progress = nullptr);

std::string summary_line(const CriterionResult& r);
std::string suite_json(const std::vector<CriterionResult>& results);

}  // namespace multifrac::acceptance

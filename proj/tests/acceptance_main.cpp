// Runs acceptance criteria and exits nonzero when any of them fails.
#include "acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    multifrac::acceptance::Options opts;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) opts.only.insert(std::atoi(argv[++i]));
        else if (arg == "--corrupt-moments") opts.corrupt_moments = true;
        else {
            std::cerr << "usage: multifrac_acceptance [--only N]... [--corrupt-moments]\n";
            return 2;
        }
    }
    const auto results = multifrac::acceptance::run_suite(opts, &std::cout);
    for (const auto& r : results)
        if (!r.pass) return 1;
    return 0;
}

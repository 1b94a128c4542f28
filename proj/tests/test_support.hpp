#pragma once

#include <multifrac/ensemble.hpp>
#include <multifrac/error.hpp>
#include <multifrac/numeric.hpp>

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace mft {

// Two equally weighted atoms {1, 2} at ell = 1/e, so ln ell = -1 and every
// exponent has a closed form in ln((1 + 2^p) / 2).
inline multifrac::IncrementEnsemble two_atoms() {
    return multifrac::IncrementEnsemble::atomic(0.36787944117144233, {1.0, 2.0}, {0.5, 0.5});
}

inline multifrac::IncrementEnsemble random_atoms(std::mt19937_64& rng, bool allow_zero = false) {
    std::uniform_int_distribution<int> count(2, 10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int k = count(rng);
    std::vector<double> mags, w;
    for (int i = 0; i < k; ++i) {
        mags.push_back(std::exp(std::log(0.05) + u(rng) * std::log(60.0)));
        w.push_back(0.01 + u(rng));
    }
    if (allow_zero && u(rng) < 0.5) mags[0] = 0.0;
    return multifrac::IncrementEnsemble::atomic(std::pow(2.0, -1.0 - 8.0 * u(rng)), mags, w);
}

}  // namespace mft

#define EXPECT_MF_ERROR(stmt, expected_kind)                                       \
    do {                                                                           \
        try {                                                                      \
            stmt;                                                                  \
            ADD_FAILURE() << "expected multifrac::Error from " #stmt;              \
        } catch (const multifrac::Error& e) {                                      \
            EXPECT_EQ(e.kind(), expected_kind) << e.what();                        \
        }                                                                          \
    } while (0)

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace latspec {

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// n(s + t, A + B) <= n(s, A) + n(t, B) and the eigenvalue form of Weyl's inequality
/// on random symmetric pairs.
PropertyResult weyl_suite(int pairs, std::uint64_t seed);

/// Eigenvalues of the Birman-Schwinger matrix come in +- pairs (to 1e-10).
PropertyResult bs_symmetry_suite(std::uint64_t seed);

/// Delta decreasing in z below the channel minimum and in mu, along random chains.
PropertyResult delta_monotonicity_suite(std::uint64_t seed);

/// Legendre and Nystrom sphere counts agree on random (lambda, mu).
PropertyResult sphere_count_suite(int samples, std::uint64_t seed);

/// Conditional negative definiteness of the builtin dispersion.
PropertyResult cnd_suite(std::uint64_t seed);

std::vector<PropertyResult> run_property_suites(std::uint64_t seed);

} // namespace latspec

#pragma once

// Slow reference implementations. They share no code path with the library
// routines they check and are used only by tests and `phdcmp oracle-check`.

#include "phdcmp/doctrine.hpp"
#include "phdcmp/phd_core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phdcmp::oracle {

/// O(n^2) convolution: every (output, input) bin pair, with the mask looked up
/// by the physical distance between the two bin centers.
[[nodiscard]] std::vector<double> brute_force_convolution(const GridPhd& unit_phd,
                                                          const DoctrineMask& mask);

/// Integral of the piecewise-constant intensity over [a, b] by midpoint
/// quadrature with `samples` points.
[[nodiscard]] double integrate_by_sampling(const GridPhd& phd, double a, double b,
                                           std::size_t samples = 200000);

/// Per-bin doctrine mass by composite Simpson quadrature of the Gaussian
/// density, on the same bin layout as doctrine_mask().
[[nodiscard]] std::vector<double> mask_by_quadrature(const DoctrineSpec& spec, double bin_width,
                                                     std::size_t half_bins,
                                                     std::size_t panels_per_bin = 64);

struct CheckResult {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    [[nodiscard]] bool passed() const noexcept { return max_error <= tolerance; }
};

/// Runs the oracles against the production routines on seeded random inputs.
[[nodiscard]] std::vector<CheckResult> run_oracle_checks(std::uint64_t seed);

}  // namespace phdcmp::oracle

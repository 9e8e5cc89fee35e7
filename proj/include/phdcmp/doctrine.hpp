#pragma once

#include "phdcmp/metrics.hpp"
#include "phdcmp/phd_core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace phdcmp {

/// Prescribed sub-unit layout relative to the unit position: one Gaussian
/// component per sub-unit, centered at `offsets[k]` with spread `sigma` and
/// expected count `weights[k]`.
struct DoctrineSpec {
    std::vector<double> offsets;
    double sigma = 0.0;
    std::vector<double> weights;

    /// Evenly spread triple {-spacing, 0, +spacing} with unit weights.
    [[nodiscard]] static DoctrineSpec three_subunits(double spacing, double sigma);

    void validate() const;
    [[nodiscard]] double subunit_count() const noexcept;
};

/// Sub-unit PHD conditional on an exactly known unit at the origin, sampled
/// on an odd number of bins so that the middle bin is centered on 0.
class DoctrineMask {
public:
    /// `values` has odd length 2K+1; bin k is centered on (k - K) * bin_width.
    DoctrineMask(std::vector<double> values, double bin_width);

    [[nodiscard]] const GridPhd& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return grid_.values(); }
    [[nodiscard]] std::size_t center_bin() const noexcept { return grid_.values().size() / 2; }
    /// The comparison-grid bin width this mask was built for (kept verbatim
    /// so the equality check in apply_doctrine is exact).
    [[nodiscard]] double bin_width() const noexcept { return bin_width_; }
    [[nodiscard]] double half_width() const noexcept {
        return (static_cast<double>(center_bin()) + 0.5) * bin_width_;
    }

private:
    GridPhd grid_;
    double bin_width_;
};

struct DoctrineApplied {
    GridPhd grid;
    double leaked_mass = 0.0;  ///< mass pushed outside the domain by the convolution
};

struct WeightedDoctrine {
    DoctrineSpec spec;
    double prior = 1.0;
};

struct DoctrineSelection {
    std::size_t best_index = 0;
    std::vector<double> distances;
};

inline constexpr double kDefaultTruncationSigmas = 5.0;

/// Mask with per-bin Gaussian mass computed from CDF differences. Components
/// with sigma < bin_width / 2 deposit their whole weight in one bin.
[[nodiscard]] DoctrineMask doctrine_mask(const DoctrineSpec& spec, double bin_width,
                                         double truncation_sigmas = kDefaultTruncationSigmas);

/// Doctrine(D_U): convolution of the unit PHD with the mask, zero padded.
/// Throws ConfigError unless the mask bin width equals the grid bin width.
[[nodiscard]] DoctrineApplied apply_doctrine(const GridPhd& unit_phd, const DoctrineMask& mask);

/// Prior-weighted sum of the individual doctrine masks.
[[nodiscard]] DoctrineMask superpose(std::span<const WeightedDoctrine> doctrines, double bin_width,
                                     double truncation_sigmas = kDefaultTruncationSigmas);

/// Scores every candidate by distance(subunit_phd, Doctrine_k(unit_phd)) and
/// returns the argmin (lowest index on ties) with the full score list.
[[nodiscard]] DoctrineSelection select_best_doctrine(const GridPhd& unit_phd,
                                                     const GridPhd& subunit_phd,
                                                     std::span<const DoctrineSpec> candidates,
                                                     NormOrder p,
                                                     double truncation_sigmas = kDefaultTruncationSigmas);

}  // namespace phdcmp

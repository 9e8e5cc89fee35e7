#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace phdcmp {

/// Raised when a configuration or construction argument violates a contract.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a NaN or infinity shows up in a computed quantity.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Single-object state: position (m) and velocity (m/s).
struct StateVector {
    double position = 0.0;
    double velocity = 0.0;

    friend bool operator==(const StateVector&, const StateVector&) = default;
};

struct Particle {
    StateVector state;
    double weight = 0.0;

    friend bool operator==(const Particle&, const Particle&) = default;
};

/// Weighted particle representation of a PHD. The total weight is the
/// expected number of objects and is not normalized.
class ParticlePhd {
public:
    ParticlePhd() = default;
    explicit ParticlePhd(std::vector<Particle> particles);

    [[nodiscard]] std::span<const Particle> particles() const noexcept { return particles_; }
    [[nodiscard]] std::size_t size() const noexcept { return particles_.size(); }
    [[nodiscard]] bool empty() const noexcept { return particles_.empty(); }

    friend bool operator==(const ParticlePhd&, const ParticlePhd&) = default;

private:
    std::vector<Particle> particles_;
};

/// Uniform 1D position grid over [x_min, x_max].
class GridSpec {
public:
    GridSpec(double x_min, double x_max, std::size_t n_bins);

    [[nodiscard]] double x_min() const noexcept { return x_min_; }
    [[nodiscard]] double x_max() const noexcept { return x_max_; }
    [[nodiscard]] std::size_t n_bins() const noexcept { return n_bins_; }
    [[nodiscard]] double bin_width() const noexcept { return (x_max_ - x_min_) / static_cast<double>(n_bins_); }
    [[nodiscard]] double edge(std::size_t i) const noexcept;
    [[nodiscard]] double center(std::size_t i) const noexcept;

    /// Bin holding x under half-open [edge_i, edge_{i+1}) membership with the
    /// last bin closed. Returns n_bins() when x lies outside the domain.
    [[nodiscard]] std::size_t bin_of(double x) const noexcept;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_bins_;
};

/// Signed function sampled per bin on a GridSpec. Used for differences of
/// PHDs, where values can be negative.
struct GridFunction {
    GridSpec spec;
    std::vector<double> values;
};

/// Non-negative intensity (objects per meter) on a GridSpec.
class GridPhd {
public:
    /// All-zero intensity.
    explicit GridPhd(GridSpec spec);
    GridPhd(GridSpec spec, std::vector<double> values);

    [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    [[nodiscard]] GridFunction as_function() const { return {spec_, values_}; }

    friend bool operator==(const GridPhd&, const GridPhd&) = default;

private:
    GridSpec spec_;
    std::vector<double> values_;
};

struct Discretized {
    GridPhd grid;
    double dropped_mass = 0.0;
};

[[nodiscard]] double mass(const ParticlePhd& phd) noexcept;
[[nodiscard]] double mass(const GridPhd& phd) noexcept;

/// Integral of the intensity over [a, b]; partial bins count by overlap.
/// Throws std::domain_error when [a, b] is not inside the grid domain.
[[nodiscard]] double mass_in(const GridPhd& phd, double a, double b);

/// Position-marginal histogram of a particle PHD. Out-of-domain particles are
/// dropped and their weight reported in `dropped_mass`.
[[nodiscard]] Discretized discretize(const ParticlePhd& phd, const GridSpec& spec);

/// Pointwise a - b. Throws ConfigError on GridSpec mismatch.
[[nodiscard]] GridFunction difference(const GridPhd& a, const GridPhd& b);

}  // namespace phdcmp

#pragma once

#include "phdcmp/observation.hpp"
#include "phdcmp/phd_core.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace phdcmp {

/// One unit moving along a line, with three sub-units placed around it by
/// doctrine each step.
struct ScenarioConfig {
    double unit_velocity_mean = 1.0;      ///< v_U, m/s
    double unit_velocity_std = 0.2;       ///< sigma_U, m/s
    double doctrine_spacing = 5.0;        ///< x_Doctrine, m
    double doctrine_sigma = 0.5;          ///< sigma_Doctrine, m
    double p_detect = 0.95;               ///< per-object detection probability
    double obs_noise_position = 0.5;      ///< sigma_O^x, m
    double obs_noise_velocity = 0.1;      ///< sigma_O^v, m/s
    double initial_position = 50.0;       ///< x_0, m
    double dt = 1.0;                      ///< s
    std::size_t n_steps = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TruthStep {
    StateVector unit;
    std::array<StateVector, 3> subunits;
};

/// Seeds of the independent RNG streams a simulation draws from.
struct StreamSeeds {
    std::uint64_t truth = 0;
    std::uint64_t unit_sensor = 0;
    std::uint64_t subunit_sensor = 0;

    /// Derives three decorrelated stream seeds from one master seed.
    [[nodiscard]] static StreamSeeds from_master(std::uint64_t seed);

    /// Seed of stream `stream` under master seed `master`. Streams 1-3 are
    /// the simulator's; callers may use higher indices for their own RNGs.
    [[nodiscard]] static std::uint64_t derive(std::uint64_t master, std::uint32_t stream);
};

struct ScenarioRun {
    std::vector<TruthStep> truth;
    std::vector<ObservationSet> unit_observations;
    std::vector<ObservationSet> subunit_observations;
};

/// Sub-unit positions x - spacing + n1, x + n2, x + spacing + n3 with
/// n_i ~ N(0, doctrine_sigma).
[[nodiscard]] std::array<double, 3> subunit_positions(double unit_position,
                                                      const ScenarioConfig& config,
                                                      std::mt19937_64& rng);

[[nodiscard]] ScenarioRun simulate(const ScenarioConfig& config);
[[nodiscard]] ScenarioRun simulate(const ScenarioConfig& config, const StreamSeeds& seeds);

}  // namespace phdcmp

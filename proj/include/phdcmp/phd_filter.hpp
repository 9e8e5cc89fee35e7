#pragma once

#include "phdcmp/observation.hpp"
#include "phdcmp/phd_core.hpp"

#include <cstddef>
#include <cstdint>
#include <random>

namespace phdcmp {

using Rng = std::mt19937_64;

/// Near-constant-velocity dynamics assumed by the filter.
struct MotionModel {
    double mean_velocity_drift = 0.0;       ///< m/s added to velocity each step
    double process_noise_position = 0.5;    ///< m
    double process_noise_velocity = 0.2;    ///< m/s
    double survival_probability = 0.99;

    void validate() const;
};

/// Detection and measurement model. `detection_probability` is the per-object
/// chance that the sensor reports it in a step.
struct SensorModel {
    double detection_probability = 0.95;
    double obs_noise_position = 0.5;   ///< m
    double obs_noise_velocity = 0.1;   ///< m/s
    double clutter_intensity = 0.0;    ///< expected clutter per unit state-space volume

    void validate() const;

    /// Gaussian likelihood g(z | x) over position and velocity.
    [[nodiscard]] double likelihood(const Measurement& z, const StateVector& x) const noexcept;
};

/// Uniform birth intensity over a position x velocity box.
struct BirthModel {
    double birth_mass_per_step = 0.02;
    double x_min = 0.0;
    double x_max = 200.0;
    double v_min = -3.0;
    double v_max = 3.0;
    std::size_t particles_per_birth = 200;

    void validate() const;
};

struct FilterConfig {
    std::size_t particles_per_expected_target = 500;
    MotionModel motion;
    SensorModel sensor;
    BirthModel birth;
    std::uint64_t rng_seed = 0;

    void validate() const;

    /// Resampling target for a PHD carrying `expected_count` objects.
    [[nodiscard]] std::size_t particle_budget(double expected_count) const noexcept;
};

/// Counters for degenerate events encountered while filtering.
struct FilterDiagnostics {
    std::size_t zero_likelihood_observations = 0;
    std::size_t empty_resamples = 0;
    std::size_t resamples = 0;
};

/// Moves every particle through the motion model, scales weights by the
/// survival probability, and appends the birth particles.
[[nodiscard]] ParticlePhd predict(const ParticlePhd& phd, const MotionModel& motion,
                                  const BirthModel& birth, double dt, Rng& rng);

/// PHD corrector:
///   w_i' = (1 - p_D) w_i + sum_z p_D g(z|x_i) w_i / (lambda_c + sum_j p_D g(z|x_j) w_j)
/// An observation whose denominator is exactly zero contributes nothing and is
/// counted in `diagnostics`.
[[nodiscard]] ParticlePhd update(const ParticlePhd& phd, const ObservationSet& obs,
                                 const SensorModel& sensor,
                                 FilterDiagnostics* diagnostics = nullptr);

/// Systematic resampling to `target_count` equally weighted particles carrying
/// the input mass. Zero input mass yields an empty PHD.
[[nodiscard]] ParticlePhd resample(const ParticlePhd& phd, std::size_t target_count, Rng& rng,
                                   FilterDiagnostics* diagnostics = nullptr);

/// (sum w)^2 / sum w^2; zero for an empty or massless PHD.
[[nodiscard]] double effective_sample_size(const ParticlePhd& phd) noexcept;

/// predict -> update -> resample, the last only when the effective sample
/// size drops below half the particle budget.
[[nodiscard]] ParticlePhd filter_step(const ParticlePhd& phd, const ObservationSet& obs,
                                      const FilterConfig& config, double dt, Rng& rng,
                                      FilterDiagnostics* diagnostics = nullptr);

/// A filter instance: its PHD, its private RNG stream, and diagnostics.
class PhdFilter {
public:
    explicit PhdFilter(FilterConfig config);

    void step(const ObservationSet& obs, double dt);

    [[nodiscard]] const ParticlePhd& phd() const noexcept { return phd_; }
    [[nodiscard]] const FilterConfig& config() const noexcept { return config_; }
    [[nodiscard]] const FilterDiagnostics& diagnostics() const noexcept { return diagnostics_; }

private:
    FilterConfig config_;
    Rng rng_;
    ParticlePhd phd_;
    FilterDiagnostics diagnostics_;
};

}  // namespace phdcmp

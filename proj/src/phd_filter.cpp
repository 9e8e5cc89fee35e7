#include "phdcmp/phd_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace phdcmp {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

double gaussian_pdf(double residual, double sigma) noexcept {
    const double u = residual / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

void MotionModel::validate() const {
    if (!std::isfinite(mean_velocity_drift))
        throw ConfigError("MotionModel: drift must be finite");
    if (!(process_noise_position >= 0.0) || !(process_noise_velocity >= 0.0))
        throw ConfigError("MotionModel: process noise stds must be >= 0");
    if (!is_probability(survival_probability))
        throw ConfigError("MotionModel: survival_probability must be in [0, 1]");
}

void SensorModel::validate() const {
    if (!(detection_probability > 0.0 && detection_probability <= 1.0))
        throw ConfigError("SensorModel: detection_probability must be in (0, 1]");
    if (!(obs_noise_position > 0.0) || !(obs_noise_velocity > 0.0))
        throw ConfigError("SensorModel: observation noise stds must be > 0");
    if (!(clutter_intensity >= 0.0) || !std::isfinite(clutter_intensity))
        throw ConfigError("SensorModel: clutter_intensity must be finite and >= 0");
}

double SensorModel::likelihood(const Measurement& z, const StateVector& x) const noexcept {
    return gaussian_pdf(z.position - x.position, obs_noise_position) *
           gaussian_pdf(z.velocity - x.velocity, obs_noise_velocity);
}

void BirthModel::validate() const {
    if (!(birth_mass_per_step >= 0.0) || !std::isfinite(birth_mass_per_step))
        throw ConfigError("BirthModel: birth_mass_per_step must be finite and >= 0");
    if (!(x_min < x_max) || !(v_min < v_max))
        throw ConfigError("BirthModel: birth region must be non-degenerate");
    if (particles_per_birth == 0)
        throw ConfigError("BirthModel: particles_per_birth must be positive");
}

void FilterConfig::validate() const {
    if (particles_per_expected_target < 50)
        throw ConfigError("FilterConfig: particles_per_expected_target must be >= 50");
    motion.validate();
    sensor.validate();
    birth.validate();
}

std::size_t FilterConfig::particle_budget(double expected_count) const noexcept {
    const double scaled = static_cast<double>(particles_per_expected_target) * expected_count;
    return std::max(particles_per_expected_target, static_cast<std::size_t>(std::llround(scaled)));
}

ParticlePhd predict(const ParticlePhd& phd, const MotionModel& motion, const BirthModel& birth,
                    double dt, Rng& rng) {
    if (!(dt > 0.0)) throw ConfigError("predict: dt must be > 0");

    std::normal_distribution<double> unit_normal(0.0, 1.0);
    std::vector<Particle> out;
    out.reserve(phd.size() + (birth.birth_mass_per_step > 0.0 ? birth.particles_per_birth : 0));

    for (const auto& p : phd.particles()) {
        Particle moved;
        moved.state.position = p.state.position + p.state.velocity * dt;
        moved.state.velocity = p.state.velocity + motion.mean_velocity_drift;
        if (motion.process_noise_position > 0.0)
            moved.state.position += motion.process_noise_position * unit_normal(rng);
        if (motion.process_noise_velocity > 0.0)
            moved.state.velocity += motion.process_noise_velocity * unit_normal(rng);
        moved.weight = p.weight * motion.survival_probability;
        out.push_back(moved);
    }

    if (birth.birth_mass_per_step > 0.0) {
        std::uniform_real_distribution<double> pos(birth.x_min, birth.x_max);
        std::uniform_real_distribution<double> vel(birth.v_min, birth.v_max);
        const double w = birth.birth_mass_per_step / static_cast<double>(birth.particles_per_birth);
        for (std::size_t i = 0; i < birth.particles_per_birth; ++i) {
            const double x = pos(rng);
            const double v = vel(rng);
            out.push_back({{x, v}, w});
        }
    }
    return ParticlePhd(std::move(out));
}

ParticlePhd update(const ParticlePhd& phd, const ObservationSet& obs, const SensorModel& sensor,
                   FilterDiagnostics* diagnostics) {
    const auto particles = phd.particles();
    const double p_d = sensor.detection_probability;

    std::vector<Particle> out(particles.begin(), particles.end());
    for (auto& p : out) p.weight *= (1.0 - p_d);
    if (obs.empty()) return ParticlePhd(std::move(out));

    std::vector<double> scaled(particles.size());
    for (const auto& z : obs.measurements) {
        double denom = sensor.clutter_intensity;
        for (std::size_t i = 0; i < particles.size(); ++i) {
            scaled[i] = p_d * sensor.likelihood(z, particles[i].state) * particles[i].weight;
            denom += scaled[i];
        }
        if (denom == 0.0) {
            if (diagnostics) ++diagnostics->zero_likelihood_observations;
            continue;
        }
        for (std::size_t i = 0; i < particles.size(); ++i) out[i].weight += scaled[i] / denom;
    }
    return ParticlePhd(std::move(out));
}

ParticlePhd resample(const ParticlePhd& phd, std::size_t target_count, Rng& rng,
                     FilterDiagnostics* diagnostics) {
    if (target_count == 0) throw ConfigError("resample: target_count must be positive");
    const double total = mass(phd);
    if (!(total > 0.0)) {
        if (diagnostics) ++diagnostics->empty_resamples;
        return {};
    }
    if (diagnostics) ++diagnostics->resamples;

    const auto particles = phd.particles();
    const double n = static_cast<double>(target_count);
    const double w_out = total / n;
    const double u0 = std::uniform_real_distribution<double>(0.0, 1.0)(rng) / n;

    std::vector<Particle> out;
    out.reserve(target_count);
    double cumulative = particles[0].weight / total;
    std::size_t i = 0;
    for (std::size_t k = 0; k < target_count; ++k) {
        const double u = u0 + static_cast<double>(k) / n;
        while (u > cumulative && i + 1 < particles.size()) {
            ++i;
            cumulative += particles[i].weight / total;
        }
        out.push_back({particles[i].state, w_out});
    }
    return ParticlePhd(std::move(out));
}

double effective_sample_size(const ParticlePhd& phd) noexcept {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& p : phd.particles()) {
        sum += p.weight;
        sum_sq += p.weight * p.weight;
    }
    return sum_sq > 0.0 ? sum * sum / sum_sq : 0.0;
}

ParticlePhd filter_step(const ParticlePhd& phd, const ObservationSet& obs,
                        const FilterConfig& config, double dt, Rng& rng,
                        FilterDiagnostics* diagnostics) {
    auto predicted = predict(phd, config.motion, config.birth, dt, rng);
    if (predicted.empty()) return predicted;
    auto updated = update(predicted, obs, config.sensor, diagnostics);

    const double expected = mass(updated);
    const auto budget = config.particle_budget(expected);
    if (effective_sample_size(updated) < 0.5 * static_cast<double>(budget))
        return resample(updated, budget, rng, diagnostics);
    return updated;
}

PhdFilter::PhdFilter(FilterConfig config) : config_(std::move(config)), rng_(config_.rng_seed) {
    config_.validate();
}

void PhdFilter::step(const ObservationSet& obs, double dt) {
    phd_ = filter_step(phd_, obs, config_, dt, rng_, &diagnostics_);
}

}  // namespace phdcmp

#include "phdcmp/scenario.hpp"

#include <cmath>

namespace phdcmp {

namespace {

// Each true object is reported with probability p_detect plus Gaussian noise.
void observe(const StateVector& truth, const ScenarioConfig& config, std::mt19937_64& rng,
             std::vector<Measurement>& out) {
    std::bernoulli_distribution detected(config.p_detect);
    std::normal_distribution<double> noise(0.0, 1.0);
    if (!detected(rng)) return;
    const double x = truth.position + config.obs_noise_position * noise(rng);
    const double v = truth.velocity + config.obs_noise_velocity * noise(rng);
    out.push_back({x, v});
}

}  // namespace

void ScenarioConfig::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(unit_velocity_mean) || !finite(initial_position))
        throw ConfigError("ScenarioConfig: v_U and x_0 must be finite");
    if (!(unit_velocity_std >= 0.0) || !finite(unit_velocity_std))
        throw ConfigError("ScenarioConfig: sigma_U must be >= 0");
    if (!(doctrine_spacing > 0.0) || !finite(doctrine_spacing))
        throw ConfigError("ScenarioConfig: x_Doctrine must be > 0");
    if (!(doctrine_sigma >= 0.0) || !finite(doctrine_sigma))
        throw ConfigError("ScenarioConfig: sigma_Doctrine must be >= 0");
    if (!(p_detect >= 0.0 && p_detect <= 1.0))
        throw ConfigError("ScenarioConfig: p_detect must be in [0, 1]");
    if (!(obs_noise_position > 0.0) || !(obs_noise_velocity > 0.0))
        throw ConfigError("ScenarioConfig: observation noise stds must be > 0");
    if (!(dt > 0.0) || !finite(dt)) throw ConfigError("ScenarioConfig: dt must be > 0");
    if (n_steps == 0) throw ConfigError("ScenarioConfig: n_steps must be positive");
}

std::uint64_t StreamSeeds::derive(std::uint64_t master, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      stream};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

StreamSeeds StreamSeeds::from_master(std::uint64_t seed) {
    return {derive(seed, 1), derive(seed, 2), derive(seed, 3)};
}

std::array<double, 3> subunit_positions(double unit_position, const ScenarioConfig& config,
                                        std::mt19937_64& rng) {
    std::normal_distribution<double> deviation(0.0, 1.0);
    const double s = config.doctrine_sigma;
    std::array<double, 3> out{unit_position - config.doctrine_spacing, unit_position,
                              unit_position + config.doctrine_spacing};
    for (double& x : out) x += s * deviation(rng);
    return out;
}

ScenarioRun simulate(const ScenarioConfig& config) {
    return simulate(config, StreamSeeds::from_master(config.seed));
}

ScenarioRun simulate(const ScenarioConfig& config, const StreamSeeds& seeds) {
    config.validate();
    std::mt19937_64 truth_rng(seeds.truth);
    std::mt19937_64 unit_rng(seeds.unit_sensor);
    std::mt19937_64 subunit_rng(seeds.subunit_sensor);
    std::normal_distribution<double> standard_normal(0.0, 1.0);

    ScenarioRun run;
    run.truth.reserve(config.n_steps);
    run.unit_observations.reserve(config.n_steps);
    run.subunit_observations.reserve(config.n_steps);

    double x = config.initial_position;
    for (std::size_t t = 0; t < config.n_steps; ++t) {
        const double v =
            config.unit_velocity_mean + config.unit_velocity_std * standard_normal(truth_rng);
        TruthStep step;
        step.unit = {x, v};
        const auto sub = subunit_positions(x, config, truth_rng);
        for (std::size_t i = 0; i < 3; ++i) step.subunits[i] = {sub[i], v};

        ObservationSet unit_obs{t, {}};
        ObservationSet subunit_obs{t, {}};
        observe(step.unit, config, unit_rng, unit_obs.measurements);
        for (const auto& s : step.subunits) observe(s, config, subunit_rng, subunit_obs.measurements);

        run.truth.push_back(step);
        run.unit_observations.push_back(std::move(unit_obs));
        run.subunit_observations.push_back(std::move(subunit_obs));
        x += v * config.dt;
    }
    return run;
}

}  // namespace phdcmp

#pragma once

#include "phdcmp/doctrine.hpp"
#include "phdcmp/metrics.hpp"
#include "phdcmp/phd_core.hpp"
#include "phdcmp/phd_filter.hpp"
#include "phdcmp/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phdcmp {

/// Filter parameters as written in a config file. Sensor fields left unset
/// are inherited from the scenario; an unset birth position range spans
/// the comparison grid.
struct FilterSettings {
    std::size_t particles_per_expected_target = 500;
    MotionModel motion;
    double clutter_intensity = 0.0;
    double birth_mass_per_step = 0.02;
    std::size_t particles_per_birth = 200;
    double birth_v_min = -3.0;
    double birth_v_max = 3.0;
    std::optional<double> birth_x_min;
    std::optional<double> birth_x_max;
    std::optional<double> detection_probability;
    std::optional<double> obs_noise_position;
    std::optional<double> obs_noise_velocity;
};

enum class DoctrineMode {
    Matched,   ///< transform uses the doctrine the simulator uses
    Explicit,  ///< transform uses `doctrines` (one spec, or a prior-weighted superposition)
};

struct LocalizationSettings {
    double threshold = 0.5;
    double min_width = 5.0;
    NormOrder norm = NormOrder::L1;
};

struct ExperimentConfig {
    ScenarioConfig scenario;
    FilterSettings unit_filter;
    FilterSettings subunit_filter;
    DoctrineMode doctrine_mode = DoctrineMode::Matched;
    std::vector<WeightedDoctrine> doctrines;
    double truncation_sigmas = kDefaultTruncationSigmas;
    GridSpec grid{0.0, 200.0, 400};
    std::vector<NormOrder> norms{NormOrder::L1, NormOrder::L2, NormOrder::LInf};
    std::optional<LocalizationSettings> localization;
    std::size_t burn_in = 20;
    std::size_t snapshot_every = 10;  ///< 0 disables grid snapshots
    std::filesystem::path output_dir;

    /// Throws ConfigError on any inconsistency, including a grid that does not
    /// cover the scenario's expected track or a doctrine whose expected
    /// sub-unit count is not 3.
    void validate() const;

    /// The doctrine(s) the transform applies, with priors summing to 1.
    [[nodiscard]] std::vector<WeightedDoctrine> transform_doctrines() const;

    /// FilterConfig with scenario inheritance applied and the RNG seed derived
    /// from the scenario seed.
    [[nodiscard]] FilterConfig resolved_unit_filter() const;
    [[nodiscard]] FilterConfig resolved_subunit_filter() const;

    [[nodiscard]] bool wants(NormOrder p) const;
};

/// Doctrine-noise regimes. Each preset changes only scenario.doctrine_sigma.
enum class Preset { Exact, Moderate, Loose };

[[nodiscard]] Preset parse_preset(std::string_view name);
[[nodiscard]] std::string to_string(Preset preset);
void apply_preset(ExperimentConfig& config, Preset preset);

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, duplicate
/// keys, and malformed values throw ConfigError naming the line.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Every effective parameter, fully resolved, as key -> value text.
[[nodiscard]] std::map<std::string, std::string> materialize(const ExperimentConfig& config);

/// materialize() rendered back into the config file format.
[[nodiscard]] std::string to_config_text(const ExperimentConfig& config);

}  // namespace phdcmp

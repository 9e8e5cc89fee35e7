#include "phdcmp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

namespace phdcmp {

namespace {

constexpr std::uint32_t kUnitFilterStream = 4;
constexpr std::uint32_t kSubunitFilterStream = 5;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ConfigError("expected a finite number, got '" + text + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("expected a non-negative integer, got '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item)));
    if (out.empty()) throw ConfigError("expected a comma-separated list of numbers");
    return out;
}

std::string format_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += format_double(values[i]);
    }
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

void add_filter_keys(std::map<std::string, Setter>& keys, const std::string& prefix,
                     FilterSettings ExperimentConfig::*member) {
    auto field = [&](const char* name, std::function<void(FilterSettings&, const std::string&)> set) {
        keys[prefix + "." + name] = [member, set](ExperimentConfig& c, const std::string& v) {
            set(c.*member, v);
        };
    };
    field("particles_per_target", [](auto& f, auto& v) { f.particles_per_expected_target = parse_uint(v); });
    field("velocity_drift", [](auto& f, auto& v) { f.motion.mean_velocity_drift = parse_double(v); });
    field("process_noise_x", [](auto& f, auto& v) { f.motion.process_noise_position = parse_double(v); });
    field("process_noise_v", [](auto& f, auto& v) { f.motion.process_noise_velocity = parse_double(v); });
    field("survival_probability", [](auto& f, auto& v) { f.motion.survival_probability = parse_double(v); });
    field("detection_probability", [](auto& f, auto& v) { f.detection_probability = parse_double(v); });
    field("obs_noise_x", [](auto& f, auto& v) { f.obs_noise_position = parse_double(v); });
    field("obs_noise_v", [](auto& f, auto& v) { f.obs_noise_velocity = parse_double(v); });
    field("clutter_intensity", [](auto& f, auto& v) { f.clutter_intensity = parse_double(v); });
    field("birth_mass", [](auto& f, auto& v) { f.birth_mass_per_step = parse_double(v); });
    field("birth_particles", [](auto& f, auto& v) { f.particles_per_birth = parse_uint(v); });
    field("birth_x_min", [](auto& f, auto& v) { f.birth_x_min = parse_double(v); });
    field("birth_x_max", [](auto& f, auto& v) { f.birth_x_max = parse_double(v); });
    field("birth_v_min", [](auto& f, auto& v) { f.birth_v_min = parse_double(v); });
    field("birth_v_max", [](auto& f, auto& v) { f.birth_v_max = parse_double(v); });
}

const std::map<std::string, Setter>& key_table() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> s;
        s["scenario.v_U"] = [](auto& c, auto& v) { c.scenario.unit_velocity_mean = parse_double(v); };
        s["scenario.sigma_U"] = [](auto& c, auto& v) { c.scenario.unit_velocity_std = parse_double(v); };
        s["scenario.x_doctrine"] = [](auto& c, auto& v) { c.scenario.doctrine_spacing = parse_double(v); };
        s["scenario.sigma_doctrine"] = [](auto& c, auto& v) { c.scenario.doctrine_sigma = parse_double(v); };
        s["scenario.p_detect"] = [](auto& c, auto& v) { c.scenario.p_detect = parse_double(v); };
        s["scenario.sigma_obs_x"] = [](auto& c, auto& v) { c.scenario.obs_noise_position = parse_double(v); };
        s["scenario.sigma_obs_v"] = [](auto& c, auto& v) { c.scenario.obs_noise_velocity = parse_double(v); };
        s["scenario.x0"] = [](auto& c, auto& v) { c.scenario.initial_position = parse_double(v); };
        s["scenario.dt"] = [](auto& c, auto& v) { c.scenario.dt = parse_double(v); };
        s["scenario.n_steps"] = [](auto& c, auto& v) { c.scenario.n_steps = parse_uint(v); };
        s["scenario.seed"] = [](auto& c, auto& v) { c.scenario.seed = parse_uint(v); };
        add_filter_keys(s, "unit_filter", &ExperimentConfig::unit_filter);
        add_filter_keys(s, "subunit_filter", &ExperimentConfig::subunit_filter);
        s["doctrine.mode"] = [](auto& c, auto& v) {
            if (v == "matched") c.doctrine_mode = DoctrineMode::Matched;
            else if (v == "explicit") c.doctrine_mode = DoctrineMode::Explicit;
            else throw ConfigError("doctrine.mode must be 'matched' or 'explicit'");
        };
        s["doctrine.truncation_sigmas"] = [](auto& c, auto& v) { c.truncation_sigmas = parse_double(v); };
        s["norms"] = [](auto& c, auto& v) {
            c.norms.clear();
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ',')) c.norms.push_back(parse_norm_order(trim(item)));
            if (c.norms.empty()) throw ConfigError("norms must list at least one of 1, 2, inf");
        };
        auto localization = [](ExperimentConfig& c) -> LocalizationSettings& {
            if (!c.localization) c.localization.emplace();
            return *c.localization;
        };
        s["localize.threshold"] = [localization](auto& c, auto& v) { localization(c).threshold = parse_double(v); };
        s["localize.min_width"] = [localization](auto& c, auto& v) { localization(c).min_width = parse_double(v); };
        s["localize.norm"] = [localization](auto& c, auto& v) { localization(c).norm = parse_norm_order(v); };
        s["burn_in"] = [](auto& c, auto& v) { c.burn_in = parse_uint(v); };
        s["snapshot_every"] = [](auto& c, auto& v) { c.snapshot_every = parse_uint(v); };
        s["output_dir"] = [](auto& c, auto& v) { c.output_dir = v; };
        return s;
    }();
    return table;
}

// doctrine.offsets / doctrine.sigma / doctrine.weights describe a single
// explicit doctrine; doctrine.<k>.* with k >= 1 describe superposition members.
struct DoctrineDraft {
    std::optional<std::vector<double>> offsets;
    std::optional<double> sigma;
    std::optional<std::vector<double>> weights;
    std::optional<double> prior;
};

bool set_doctrine_key(const std::string& key, const std::string& value,
                      std::map<std::size_t, DoctrineDraft>& drafts) {
    static const std::regex pattern(R"(doctrine\.(?:(\d+)\.)?(offsets|sigma|weights|prior))");
    std::smatch m;
    if (!std::regex_match(key, m, pattern)) return false;
    const std::size_t index = m[1].matched ? parse_uint(m[1].str()) : 0;
    if (m[1].matched && index == 0) throw ConfigError("doctrine alternatives are numbered from 1");
    const std::string field = m[2].str();
    if (index == 0 && field == "prior") throw ConfigError("doctrine.prior requires an index");
    auto& d = drafts[index];
    if (field == "offsets") d.offsets = parse_list(value);
    else if (field == "sigma") d.sigma = parse_double(value);
    else if (field == "weights") d.weights = parse_list(value);
    else d.prior = parse_double(value);
    return true;
}

DoctrineSpec finish_draft(const DoctrineDraft& d, const ScenarioConfig& scenario) {
    DoctrineSpec spec = DoctrineSpec::three_subunits(scenario.doctrine_spacing, scenario.doctrine_sigma);
    if (d.offsets) spec.offsets = *d.offsets;
    if (d.sigma) spec.sigma = *d.sigma;
    if (d.weights) spec.weights = *d.weights;
    else spec.weights.assign(spec.offsets.size(), 1.0);
    return spec;
}

FilterConfig resolve_filter(const FilterSettings& f, const ExperimentConfig& c, std::uint32_t stream) {
    FilterConfig out;
    out.particles_per_expected_target = f.particles_per_expected_target;
    out.motion = f.motion;
    out.sensor.detection_probability = f.detection_probability.value_or(c.scenario.p_detect);
    out.sensor.obs_noise_position = f.obs_noise_position.value_or(c.scenario.obs_noise_position);
    out.sensor.obs_noise_velocity = f.obs_noise_velocity.value_or(c.scenario.obs_noise_velocity);
    out.sensor.clutter_intensity = f.clutter_intensity;
    out.birth.birth_mass_per_step = f.birth_mass_per_step;
    out.birth.particles_per_birth = f.particles_per_birth;
    out.birth.x_min = f.birth_x_min.value_or(c.grid.x_min());
    out.birth.x_max = f.birth_x_max.value_or(c.grid.x_max());
    out.birth.v_min = f.birth_v_min;
    out.birth.v_max = f.birth_v_max;
    out.rng_seed = StreamSeeds::derive(c.scenario.seed, stream);
    return out;
}

void materialize_filter(std::map<std::string, std::string>& out, const std::string& prefix,
                        const FilterConfig& f) {
    out[prefix + ".particles_per_target"] = std::to_string(f.particles_per_expected_target);
    out[prefix + ".velocity_drift"] = format_double(f.motion.mean_velocity_drift);
    out[prefix + ".process_noise_x"] = format_double(f.motion.process_noise_position);
    out[prefix + ".process_noise_v"] = format_double(f.motion.process_noise_velocity);
    out[prefix + ".survival_probability"] = format_double(f.motion.survival_probability);
    out[prefix + ".detection_probability"] = format_double(f.sensor.detection_probability);
    out[prefix + ".obs_noise_x"] = format_double(f.sensor.obs_noise_position);
    out[prefix + ".obs_noise_v"] = format_double(f.sensor.obs_noise_velocity);
    out[prefix + ".clutter_intensity"] = format_double(f.sensor.clutter_intensity);
    out[prefix + ".birth_mass"] = format_double(f.birth.birth_mass_per_step);
    out[prefix + ".birth_particles"] = std::to_string(f.birth.particles_per_birth);
    out[prefix + ".birth_x_min"] = format_double(f.birth.x_min);
    out[prefix + ".birth_x_max"] = format_double(f.birth.x_max);
    out[prefix + ".birth_v_min"] = format_double(f.birth.v_min);
    out[prefix + ".birth_v_max"] = format_double(f.birth.v_max);
}

}  // namespace

void ExperimentConfig::validate() const {
    scenario.validate();
    resolved_unit_filter().validate();
    resolved_subunit_filter().validate();
    if (norms.empty()) throw ConfigError("at least one norm order is required");
    if (!(truncation_sigmas >= 0.0)) throw ConfigError("doctrine.truncation_sigmas must be >= 0");

    const auto doctrines = transform_doctrines();
    double expected_subunits = 0.0;
    double prior_sum = 0.0;
    for (const auto& d : doctrines) {
        d.spec.validate();
        expected_subunits += d.prior * d.spec.subunit_count();
        prior_sum += d.prior;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9) throw ConfigError("doctrine priors must sum to 1");
    if (std::abs(expected_subunits - 3.0) > 1e-9)
        throw ConfigError("doctrine must describe 3 sub-units per unit (weights sum to 3)");

    const double reach = scenario.doctrine_spacing + 3.0 * scenario.doctrine_sigma;
    const double start = scenario.initial_position;
    const double end = start + static_cast<double>(scenario.n_steps) * scenario.dt * scenario.unit_velocity_mean;
    const double lo = std::min(start, end) - reach;
    const double hi = std::max(start, end) + reach;
    if (lo < grid.x_min() || hi > grid.x_max())
        throw ConfigError("grid [" + format_double(grid.x_min()) + ", " + format_double(grid.x_max()) +
                          "] does not cover the expected sub-unit track [" + format_double(lo) + ", " +
                          format_double(hi) + "]");

    if (localization) {
        if (!(localization->threshold > 0.0)) throw ConfigError("localize.threshold must be > 0");
        if (!(localization->min_width >= 2.0 * grid.bin_width()))
            throw ConfigError("localize.min_width must be at least two grid bins");
    }
}

std::vector<WeightedDoctrine> ExperimentConfig::transform_doctrines() const {
    if (doctrine_mode == DoctrineMode::Matched || doctrines.empty())
        return {{DoctrineSpec::three_subunits(scenario.doctrine_spacing, scenario.doctrine_sigma), 1.0}};
    return doctrines;
}

FilterConfig ExperimentConfig::resolved_unit_filter() const {
    return resolve_filter(unit_filter, *this, kUnitFilterStream);
}

FilterConfig ExperimentConfig::resolved_subunit_filter() const {
    return resolve_filter(subunit_filter, *this, kSubunitFilterStream);
}

bool ExperimentConfig::wants(NormOrder p) const {
    return std::find(norms.begin(), norms.end(), p) != norms.end();
}

Preset parse_preset(std::string_view name) {
    if (name == "exact") return Preset::Exact;
    if (name == "moderate") return Preset::Moderate;
    if (name == "loose") return Preset::Loose;
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected exact, moderate or loose)");
}

std::string to_string(Preset preset) {
    switch (preset) {
    case Preset::Exact: return "exact";
    case Preset::Moderate: return "moderate";
    case Preset::Loose: return "loose";
    }
    return "?";
}

void apply_preset(ExperimentConfig& config, Preset preset) {
    auto& s = config.scenario;
    switch (preset) {
    case Preset::Exact: s.doctrine_sigma = 0.01 * s.obs_noise_position; break;
    case Preset::Moderate: s.doctrine_sigma = s.obs_noise_position; break;
    case Preset::Loose: s.doctrine_sigma = s.doctrine_spacing; break;
    }
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::map<std::size_t, DoctrineDraft> drafts;
    double grid_min = config.grid.x_min();
    double grid_max = config.grid.x_max();
    std::size_t grid_bins = config.grid.n_bins();
    std::set<std::string> seen;
    const auto& table = key_table();

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        const auto where = "line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(where + "empty key or value");
        if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
        try {
            if (auto it = table.find(key); it != table.end()) it->second(config, value);
            else if (key == "grid.x_min") grid_min = parse_double(value);
            else if (key == "grid.x_max") grid_max = parse_double(value);
            else if (key == "grid.n_bins") grid_bins = parse_uint(value);
            else if (!set_doctrine_key(key, value, drafts))
                throw ConfigError("unknown key '" + key + "'");
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }

    config.grid = GridSpec(grid_min, grid_max, grid_bins);

    if (!drafts.empty()) {
        if (config.doctrine_mode != DoctrineMode::Explicit)
            throw ConfigError("doctrine.* parameters require doctrine.mode = explicit");
        if (drafts.count(0) && drafts.size() > 1)
            throw ConfigError("use either doctrine.offsets/... or numbered doctrine.<k>.* entries, not both");
        for (const auto& [index, draft] : drafts) {
            const double prior = index == 0 ? 1.0 : draft.prior.value_or(-1.0);
            if (prior < 0.0) throw ConfigError("doctrine." + std::to_string(index) + ".prior is required");
            config.doctrines.push_back({finish_draft(draft, config.scenario), prior});
        }
    } else if (config.doctrine_mode == DoctrineMode::Explicit) {
        config.doctrines.push_back({finish_draft({}, config.scenario), 1.0});
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

std::map<std::string, std::string> materialize(const ExperimentConfig& c) {
    std::map<std::string, std::string> out;
    const auto& s = c.scenario;
    out["scenario.v_U"] = format_double(s.unit_velocity_mean);
    out["scenario.sigma_U"] = format_double(s.unit_velocity_std);
    out["scenario.x_doctrine"] = format_double(s.doctrine_spacing);
    out["scenario.sigma_doctrine"] = format_double(s.doctrine_sigma);
    out["scenario.p_detect"] = format_double(s.p_detect);
    out["scenario.sigma_obs_x"] = format_double(s.obs_noise_position);
    out["scenario.sigma_obs_v"] = format_double(s.obs_noise_velocity);
    out["scenario.x0"] = format_double(s.initial_position);
    out["scenario.dt"] = format_double(s.dt);
    out["scenario.n_steps"] = std::to_string(s.n_steps);
    out["scenario.seed"] = std::to_string(s.seed);
    materialize_filter(out, "unit_filter", c.resolved_unit_filter());
    materialize_filter(out, "subunit_filter", c.resolved_subunit_filter());

    if (c.doctrine_mode == DoctrineMode::Matched) {
        out["doctrine.mode"] = "matched";
    } else {
        out["doctrine.mode"] = "explicit";
        const auto doctrines = c.transform_doctrines();
        for (std::size_t k = 0; k < doctrines.size(); ++k) {
            const std::string p = "doctrine." + std::to_string(k + 1) + ".";
            out[p + "offsets"] = format_list(doctrines[k].spec.offsets);
            out[p + "sigma"] = format_double(doctrines[k].spec.sigma);
            out[p + "weights"] = format_list(doctrines[k].spec.weights);
            out[p + "prior"] = format_double(doctrines[k].prior);
        }
    }
    out["doctrine.truncation_sigmas"] = format_double(c.truncation_sigmas);
    out["grid.x_min"] = format_double(c.grid.x_min());
    out["grid.x_max"] = format_double(c.grid.x_max());
    out["grid.n_bins"] = std::to_string(c.grid.n_bins());
    std::string norms;
    for (std::size_t i = 0; i < c.norms.size(); ++i) norms += (i ? "," : "") + to_string(c.norms[i]);
    out["norms"] = norms;
    if (c.localization) {
        out["localize.threshold"] = format_double(c.localization->threshold);
        out["localize.min_width"] = format_double(c.localization->min_width);
        out["localize.norm"] = to_string(c.localization->norm);
    }
    out["burn_in"] = std::to_string(c.burn_in);
    out["snapshot_every"] = std::to_string(c.snapshot_every);
    if (!c.output_dir.empty()) out["output_dir"] = c.output_dir.string();
    return out;
}

std::string to_config_text(const ExperimentConfig& config) {
    std::string out;
    for (const auto& [key, value] : materialize(config)) out += key + " = " + value + "\n";
    return out;
}

}  // namespace phdcmp

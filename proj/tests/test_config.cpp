#include "phdcmp/config.hpp"

#include <gtest/gtest.h>

using namespace phdcmp;

namespace {

std::string error_of(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
    const auto c = parse_config("# nothing here\n\n");
    EXPECT_EQ(c.scenario.n_steps, 100u);
    EXPECT_EQ(c.grid.n_bins(), 400u);
    EXPECT_EQ(c.doctrine_mode, DoctrineMode::Matched);
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParsesValuesAndComments) {
    const auto c = parse_config(
        "scenario.seed = 12   # trailing comment\n"
        "scenario.p_detect=0.9\n"
        "grid.n_bins = 200\n"
        "norms = 1, inf\n"
        "unit_filter.particles_per_target = 800\n"
        "localize.threshold = 0.25\n");
    EXPECT_EQ(c.scenario.seed, 12u);
    EXPECT_DOUBLE_EQ(c.scenario.p_detect, 0.9);
    EXPECT_EQ(c.grid.n_bins(), 200u);
    EXPECT_TRUE(c.wants(NormOrder::L1));
    EXPECT_FALSE(c.wants(NormOrder::L2));
    EXPECT_EQ(c.unit_filter.particles_per_expected_target, 800u);
    ASSERT_TRUE(c.localization.has_value());
    EXPECT_DOUBLE_EQ(c.localization->threshold, 0.25);
}

TEST(Config, ErrorsNameTheLine) {
    EXPECT_NE(error_of("scenario.seed = 1\nbogus.key = 3\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("scenario.seed = 1\nscenario.seed = 2\n").find("duplicate"), std::string::npos);
    EXPECT_NE(error_of("scenario.v_U = fast\n").find("line 1"), std::string::npos);
    EXPECT_NE(error_of("no equals sign\n").find("line 1"), std::string::npos);
    EXPECT_NE(error_of("norms = 3\n").find("line 1"), std::string::npos);
}

TEST(Config, GridKeysMayAppearInAnyOrder) {
    const auto c = parse_config("grid.x_max = 500\ngrid.x_min = 300\n");
    EXPECT_EQ(c.grid.x_min(), 300.0);
    EXPECT_EQ(c.grid.x_max(), 500.0);
}

TEST(Config, FilterInheritsSensorFromScenario) {
    auto c = parse_config("scenario.sigma_obs_x = 0.7\nsubunit_filter.obs_noise_x = 0.9\n");
    EXPECT_DOUBLE_EQ(c.resolved_unit_filter().sensor.obs_noise_position, 0.7);
    EXPECT_DOUBLE_EQ(c.resolved_subunit_filter().sensor.obs_noise_position, 0.9);
    EXPECT_DOUBLE_EQ(c.resolved_unit_filter().birth.x_max, c.grid.x_max());
    EXPECT_NE(c.resolved_unit_filter().rng_seed, c.resolved_subunit_filter().rng_seed);
}

TEST(Config, ExplicitSingleDoctrine) {
    const auto c = parse_config(
        "doctrine.mode = explicit\n"
        "doctrine.offsets = -4, 0, 4\n"
        "doctrine.sigma = 1.0\n");
    const auto d = c.transform_doctrines();
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].spec.offsets, (std::vector<double>{-4, 0, 4}));
    EXPECT_EQ(d[0].spec.weights, (std::vector<double>{1, 1, 1}));
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, SuperpositionOfDoctrines) {
    const auto c = parse_config(
        "doctrine.mode = explicit\n"
        "doctrine.1.offsets = -5, 0, 5\n"
        "doctrine.1.prior = 0.7\n"
        "doctrine.2.offsets = -10, 0, 10\n"
        "doctrine.2.sigma = 2\n"
        "doctrine.2.prior = 0.3\n");
    const auto d = c.transform_doctrines();
    ASSERT_EQ(d.size(), 2u);
    EXPECT_DOUBLE_EQ(d[0].prior, 0.7);
    EXPECT_DOUBLE_EQ(d[1].spec.sigma, 2.0);
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, DoctrineKeyErrors) {
    EXPECT_FALSE(error_of("doctrine.offsets = -5,0,5\n").empty());
    EXPECT_FALSE(error_of("doctrine.mode = explicit\ndoctrine.1.offsets = -5,0,5\n").empty());
    EXPECT_FALSE(error_of("doctrine.mode = explicit\ndoctrine.offsets = 0\ndoctrine.1.offsets = 0\n"
                          "doctrine.1.prior = 1\n").empty());
    EXPECT_FALSE(error_of("doctrine.mode = sometimes\n").empty());
}

TEST(Config, DoctrineMustDescribeThreeSubunits) {
    const auto c = parse_config("doctrine.mode = explicit\ndoctrine.offsets = -5, 5\n");
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, GridMustCoverTrack) {
    auto c = parse_config("grid.x_max = 120\n");
    EXPECT_THROW(c.validate(), ConfigError);
    c = parse_config("scenario.x0 = 3\n");
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, LocalizationValidation) {
    EXPECT_THROW(parse_config("localize.min_width = 0.1\n").validate(), ConfigError);
    EXPECT_THROW(parse_config("localize.threshold = 0\n").validate(), ConfigError);
}

TEST(Config, MaterializeRoundTrips) {
    auto c = parse_config(
        "scenario.seed = 4\n"
        "doctrine.mode = explicit\n"
        "doctrine.1.offsets = -5, 0, 5\n"
        "doctrine.1.prior = 0.5\n"
        "doctrine.2.offsets = -6, 0, 6\n"
        "doctrine.2.prior = 0.5\n"
        "localize.norm = inf\n"
        "norms = 2\n");
    const auto text = to_config_text(c);
    const auto back = parse_config(text);
    EXPECT_EQ(materialize(back), materialize(c));
    EXPECT_EQ(to_config_text(back), text);
}

TEST(Config, MaterializeIsFullyResolved) {
    const auto m = materialize(ExperimentConfig{});
    EXPECT_EQ(m.at("unit_filter.detection_probability"), "0.94999999999999996");
    EXPECT_EQ(m.at("subunit_filter.birth_x_max"), "200");
    EXPECT_EQ(m.at("doctrine.mode"), "matched");
}

TEST(Presets, DifferOnlyInDoctrineSigma) {
    std::map<std::string, std::string> m[3];
    int i = 0;
    for (auto p : {Preset::Exact, Preset::Moderate, Preset::Loose}) {
        ExperimentConfig c;
        apply_preset(c, p);
        EXPECT_NO_THROW(c.validate());
        m[i++] = materialize(c);
    }
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            std::size_t differing = 0;
            for (const auto& [key, value] : m[a])
                if (m[b].at(key) != value) {
                    ++differing;
                    EXPECT_EQ(key, "scenario.sigma_doctrine");
                }
            EXPECT_EQ(differing, 1u);
        }
}

TEST(Presets, OrderedDoctrineNoise) {
    ExperimentConfig exact, moderate, loose;
    apply_preset(exact, Preset::Exact);
    apply_preset(moderate, Preset::Moderate);
    apply_preset(loose, Preset::Loose);
    EXPECT_LT(exact.scenario.doctrine_sigma, 0.05 * exact.scenario.obs_noise_position);
    EXPECT_DOUBLE_EQ(moderate.scenario.doctrine_sigma, moderate.scenario.obs_noise_position);
    EXPECT_GE(loose.scenario.doctrine_sigma, loose.scenario.doctrine_spacing);
    EXPECT_EQ(parse_preset(to_string(Preset::Loose)), Preset::Loose);
    EXPECT_THROW((void)parse_preset("tight"), ConfigError);
}

TEST(Config, LoadMissingFileIsConfigError) {
    EXPECT_THROW((void)load_config("/nonexistent/phdcmp.cfg"), ConfigError);
}

TEST(Config, ShippedExamplesAreValid) {
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(PHDCMP_CONFIG_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        EXPECT_NO_THROW(load_config(entry.path()).validate()) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 2u);
}

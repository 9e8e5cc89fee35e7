// phdcmp: runs the unit / sub-unit PHD consistency experiment.
//
//   phdcmp run --config exp.cfg --preset loose --seed 42 --out out/
//   phdcmp batch --config exp.cfg --seeds 20 --preset exact
//   phdcmp oracle-check

#include "phdcmp/config.hpp"
#include "phdcmp/experiment.hpp"
#include "phdcmp/oracles.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string norms;
    std::string localize;
};

phdcmp::ExperimentConfig build_config(const CommonOptions& opt) {
    auto config = opt.config_path.empty() ? phdcmp::ExperimentConfig{} : phdcmp::load_config(opt.config_path);
    if (!opt.preset.empty()) phdcmp::apply_preset(config, phdcmp::parse_preset(opt.preset));
    if (opt.seed) config.scenario.seed = *opt.seed;
    if (!opt.out_dir.empty()) config.output_dir = opt.out_dir;
    if (!opt.norms.empty()) {
        config.norms.clear();
        std::stringstream ss(opt.norms);
        std::string item;
        while (std::getline(ss, item, ',')) config.norms.push_back(phdcmp::parse_norm_order(item));
    }
    if (!opt.localize.empty()) {
        const auto comma = opt.localize.find(',');
        if (comma == std::string::npos) throw phdcmp::ConfigError("--localize expects THRESH,MINWIDTH");
        phdcmp::LocalizationSettings loc;
        try {
            loc.threshold = std::stod(opt.localize.substr(0, comma));
            loc.min_width = std::stod(opt.localize.substr(comma + 1));
        } catch (const std::exception&) {
            throw phdcmp::ConfigError("--localize expects THRESH,MINWIDTH");
        }
        config.localization = loc;
    }
    config.validate();
    return config;
}

int cmd_run(const CommonOptions& opt) {
    const auto config = build_config(opt);
    const auto result = phdcmp::run(config);
    std::cout << phdcmp::summary_csv(phdcmp::summarize(result.records, config.burn_in));
    if (!config.output_dir.empty()) std::cerr << "wrote artifacts to " << config.output_dir << "\n";
    return 0;
}

int cmd_batch(const CommonOptions& opt, std::size_t n_seeds) {
    if (n_seeds == 0) throw phdcmp::ConfigError("--seeds must be positive");
    auto base = build_config(opt);
    const auto out_dir = base.output_dir;
    base.output_dir.clear();

    std::vector<std::future<std::vector<phdcmp::SummaryRow>>> jobs;
    for (std::size_t i = 0; i < n_seeds; ++i) {
        auto config = base;
        config.scenario.seed = base.scenario.seed + i;
        jobs.push_back(std::async(std::launch::async, [config] {
            return phdcmp::summarize(phdcmp::run(config).records, config.burn_in);
        }));
    }

    std::string csv = "seed,quantity,mean,max,std\n";
    for (std::size_t i = 0; i < n_seeds; ++i) {
        const auto rows = jobs[i].get();
        for (const auto& row : rows) {
            char line[160];
            std::snprintf(line, sizeof line, "%llu,%s,%.10g,%.10g,%.10g\n",
                          static_cast<unsigned long long>(base.scenario.seed + i), row.quantity.c_str(),
                          row.mean, row.max, row.std);
            csv += line;
        }
    }
    std::cout << csv;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream(out_dir / "batch_summary.csv", std::ios::binary) << csv;
    }
    return 0;
}

int cmd_oracle_check(std::uint64_t seed) {
    bool ok = true;
    for (const auto& check : phdcmp::oracle::run_oracle_checks(seed)) {
        std::printf("[%s] %s: max error %.3g (tolerance %.1g)\n", check.passed() ? "PASS" : "FAIL",
                    check.name.c_str(), check.max_error, check.tolerance);
        ok = ok && check.passed();
    }
    return ok ? 0 : kExitNumerical;
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "key = value experiment config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", opt.preset, "doctrine regime: exact, moderate or loose");
    cmd->add_option("--seed", opt.seed, "master RNG seed");
    cmd->add_option("--out", opt.out_dir, "output directory for CSV artifacts");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unit / sub-unit PHD tracker consistency via doctrine convolution"};
    app.require_subcommand(1);

    CommonOptions run_opt;
    auto* run = app.add_subcommand("run", "run one experiment");
    add_common(run, run_opt);
    run->add_option("--norms", run_opt.norms, "comma-separated subset of 1,2,inf");
    run->add_option("--localize", run_opt.localize, "THRESH,MINWIDTH for failure localization");

    CommonOptions batch_opt;
    std::size_t n_seeds = 0;
    auto* batch = app.add_subcommand("batch", "Monte Carlo summaries over consecutive seeds");
    add_common(batch, batch_opt);
    batch->add_option("--seeds", n_seeds, "number of seeds")->required();

    std::uint64_t oracle_seed = 1;
    auto* oracle = app.add_subcommand("oracle-check", "compare fast paths with brute-force oracles");
    oracle->add_option("--seed", oracle_seed, "RNG seed for random test inputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_opt);
        if (*batch) return cmd_batch(batch_opt, n_seeds);
        if (*oracle) return cmd_oracle_check(oracle_seed);
    } catch (const phdcmp::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const phdcmp::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

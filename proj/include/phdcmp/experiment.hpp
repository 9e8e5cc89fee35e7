#pragma once

#include "phdcmp/config.hpp"
#include "phdcmp/metrics.hpp"
#include "phdcmp/phd_core.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace phdcmp {

/// Per-step comparison of the sub-unit tracker against the doctrine-transformed
/// unit tracker. Distances not requested in the config are empty.
struct StepRecord {
    std::size_t t = 0;
    double mass_unit = 0.0;
    double mass_subunit = 0.0;
    double mass_subunit_synth = 0.0;
    std::optional<double> d_1;
    std::optional<double> d_2;
    std::optional<double> d_inf;
    double leaked_mass = 0.0;
    std::vector<DiscrepancyRegion> regions;
};

/// The three grids of one step plus |D_SU - D*_SU|.
struct GridSnapshot {
    std::size_t t = 0;
    GridPhd unit;
    GridPhd subunit;
    GridPhd subunit_synth;
};

struct SummaryRow {
    std::string quantity;  ///< "d_1", "d_2", "d_inf", "mass_U", ...
    double mean = 0.0;
    double max = 0.0;
    double std = 0.0;
};

struct ExperimentResult {
    std::vector<StepRecord> records;
    std::vector<GridSnapshot> snapshots;
    FilterDiagnostics unit_diagnostics;
    FilterDiagnostics subunit_diagnostics;
};

/// Simulates the scenario, runs both filters on their own observation
/// streams, and compares D_SU against Doctrine(D_U) every step. Config errors
/// are raised before any simulation. Writes artifacts when output_dir is set.
[[nodiscard]] ExperimentResult run(const ExperimentConfig& config);

/// Mean, max and population std of each quantity over records[burn_in:].
/// Throws std::invalid_argument when no records remain after burn-in.
[[nodiscard]] std::vector<SummaryRow> summarize(const std::vector<StepRecord>& records,
                                                std::size_t burn_in);

/// Value of `quantity` in a summary, or throws std::out_of_range.
[[nodiscard]] const SummaryRow& summary_row(const std::vector<SummaryRow>& summary,
                                            const std::string& quantity);

/// records.csv, grids_<t>.csv, regions.csv, summary.csv, plot.gp and the
/// materialized config_used.txt.
void write_artifacts(const ExperimentConfig& config, const ExperimentResult& result,
                     const std::filesystem::path& dir);

[[nodiscard]] std::string records_csv(const std::vector<StepRecord>& records);
[[nodiscard]] std::string regions_csv(const std::vector<StepRecord>& records);
[[nodiscard]] std::string snapshot_csv(const GridSnapshot& snapshot);
[[nodiscard]] std::string summary_csv(const std::vector<SummaryRow>& summary);

}  // namespace phdcmp

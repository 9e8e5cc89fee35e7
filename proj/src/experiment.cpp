#include "phdcmp/experiment.hpp"

#include "phdcmp/doctrine.hpp"
#include "phdcmp/phd_filter.hpp"
#include "phdcmp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace phdcmp {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string{}; }

double checked(double v, const char* what, std::size_t t) {
    if (!std::isfinite(v))
        throw NumericalError(std::string("non-finite ") + what + " at step " + std::to_string(t));
    return v;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
}

std::string gnuplot_script(const ExperimentConfig& config, const ExperimentResult& result) {
    std::string s;
    s += "# Distances over time, then the stacked PHDs of the last snapshot.\n";
    s += "set datafile separator ','\n";
    s += "set terminal pngcairo size 1000,1200\n";
    s += "set output 'distances.png'\n";
    s += "set multiplot layout 3,1\n";
    const char* cols[] = {"d_1", "d_2", "d_inf"};
    const NormOrder norms[] = {NormOrder::L1, NormOrder::L2, NormOrder::LInf};
    for (int i = 0; i < 3; ++i) {
        if (!config.wants(norms[i])) continue;
        s += "set title '" + std::string(cols[i]) + "'\n";
        s += "plot 'records.csv' using 1:" + std::to_string(5 + i) + " with lines notitle\n";
    }
    s += "unset multiplot\n";
    if (!result.snapshots.empty()) {
        const auto t = std::to_string(result.snapshots.back().t);
        s += "set output 'grids_" + t + ".png'\n";
        s += "set multiplot layout 4,1\n";
        const char* titles[] = {"D_U", "D*_SU", "D_SU", "|D_SU - D*_SU|"};
        const int columns[] = {2, 4, 3, 5};
        for (int i = 0; i < 4; ++i) {
            s += "set title '" + std::string(titles[i]) + "'\n";
            s += "plot 'grids_" + t + ".csv' using 1:" + std::to_string(columns[i]) +
                 " with steps notitle\n";
        }
        s += "unset multiplot\n";
    }
    return s;
}

}  // namespace

ExperimentResult run(const ExperimentConfig& config) {
    config.validate();
    const auto& grid_spec = config.grid;
    const auto doctrines = config.transform_doctrines();
    const DoctrineMask mask = superpose(doctrines, grid_spec.bin_width(), config.truncation_sigmas);

    const auto scenario = simulate(config.scenario);
    PhdFilter unit_filter(config.resolved_unit_filter());
    PhdFilter subunit_filter(config.resolved_subunit_filter());

    ExperimentResult result;
    result.records.reserve(config.scenario.n_steps);
    const double dt = config.scenario.dt;

    for (std::size_t t = 0; t < config.scenario.n_steps; ++t) {
        unit_filter.step(scenario.unit_observations[t], dt);
        subunit_filter.step(scenario.subunit_observations[t], dt);

        auto unit_grid = discretize(unit_filter.phd(), grid_spec);
        auto subunit_grid = discretize(subunit_filter.phd(), grid_spec);
        auto synth = apply_doctrine(unit_grid.grid, mask);

        StepRecord rec;
        rec.t = t;
        rec.mass_unit = checked(mass(unit_grid.grid), "mass_U", t);
        rec.mass_subunit = checked(mass(subunit_grid.grid), "mass_SU", t);
        rec.mass_subunit_synth = checked(mass(synth.grid), "mass_SU_star", t);
        rec.leaked_mass = checked(unit_grid.dropped_mass + subunit_grid.dropped_mass + synth.leaked_mass,
                                  "leaked_mass", t);
        if (config.wants(NormOrder::L1))
            rec.d_1 = checked(distance(subunit_grid.grid, synth.grid, NormOrder::L1), "d_1", t);
        if (config.wants(NormOrder::L2))
            rec.d_2 = checked(distance(subunit_grid.grid, synth.grid, NormOrder::L2), "d_2", t);
        if (config.wants(NormOrder::LInf))
            rec.d_inf = checked(distance(subunit_grid.grid, synth.grid, NormOrder::LInf), "d_inf", t);
        if (config.localization) {
            const auto& loc = *config.localization;
            rec.regions = localize_failure(subunit_grid.grid, synth.grid, loc.norm, loc.threshold,
                                           loc.min_width);
        }
        result.records.push_back(std::move(rec));

        const bool last = t + 1 == config.scenario.n_steps;
        if (config.snapshot_every > 0 && (t % config.snapshot_every == 0 || last)) {
            result.snapshots.push_back(
                {t, std::move(unit_grid.grid), std::move(subunit_grid.grid), std::move(synth.grid)});
        }
    }
    result.unit_diagnostics = unit_filter.diagnostics();
    result.subunit_diagnostics = subunit_filter.diagnostics();

    if (!config.output_dir.empty()) write_artifacts(config, result, config.output_dir);
    return result;
}

std::vector<SummaryRow> summarize(const std::vector<StepRecord>& records, std::size_t burn_in) {
    if (records.size() <= burn_in)
        throw std::invalid_argument("summarize: " + std::to_string(records.size()) +
                                    " records do not exceed the burn-in of " + std::to_string(burn_in));

    struct Quantity {
        const char* name;
        std::optional<double> (*get)(const StepRecord&);
    };
    static constexpr Quantity quantities[] = {
        {"d_1", [](const StepRecord& r) { return r.d_1; }},
        {"d_2", [](const StepRecord& r) { return r.d_2; }},
        {"d_inf", [](const StepRecord& r) { return r.d_inf; }},
        {"mass_U", [](const StepRecord& r) { return std::optional<double>(r.mass_unit); }},
        {"mass_SU", [](const StepRecord& r) { return std::optional<double>(r.mass_subunit); }},
        {"mass_SU_star", [](const StepRecord& r) { return std::optional<double>(r.mass_subunit_synth); }},
        {"leaked_mass", [](const StepRecord& r) { return std::optional<double>(r.leaked_mass); }},
    };

    std::vector<SummaryRow> out;
    for (const auto& q : quantities) {
        std::vector<double> values;
        for (std::size_t i = burn_in; i < records.size(); ++i)
            if (auto v = q.get(records[i])) values.push_back(*v);
        if (values.empty()) continue;
        const double n = static_cast<double>(values.size());
        double sum = 0.0;
        double max = values.front();
        for (double v : values) {
            sum += v;
            max = std::max(max, v);
        }
        const double mean = sum / n;
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        out.push_back({q.name, mean, max, std::sqrt(var / n)});
    }
    return out;
}

const SummaryRow& summary_row(const std::vector<SummaryRow>& summary, const std::string& quantity) {
    for (const auto& row : summary)
        if (row.quantity == quantity) return row;
    throw std::out_of_range("summary has no quantity '" + quantity + "'");
}

std::string records_csv(const std::vector<StepRecord>& records) {
    std::string s = "t,mass_U,mass_SU,mass_SU_star,d_1,d_2,d_inf,leaked_mass\n";
    for (const auto& r : records) {
        s += std::to_string(r.t) + "," + num(r.mass_unit) + "," + num(r.mass_subunit) + "," +
             num(r.mass_subunit_synth) + "," + opt_num(r.d_1) + "," + opt_num(r.d_2) + "," +
             opt_num(r.d_inf) + "," + num(r.leaked_mass) + "\n";
    }
    return s;
}

std::string regions_csv(const std::vector<StepRecord>& records) {
    std::string s = "t,a,b,local_distance,depth\n";
    for (const auto& r : records)
        for (const auto& g : r.regions)
            s += std::to_string(r.t) + "," + num(g.a) + "," + num(g.b) + "," + num(g.local_distance) +
                 "," + std::to_string(g.depth) + "\n";
    return s;
}

std::string snapshot_csv(const GridSnapshot& snap) {
    std::string s = "bin_center,D_U,D_SU,D_SU_star,absdiff\n";
    const auto& spec = snap.unit.spec();
    for (std::size_t i = 0; i < spec.n_bins(); ++i) {
        s += num(spec.center(i)) + "," + num(snap.unit[i]) + "," + num(snap.subunit[i]) + "," +
             num(snap.subunit_synth[i]) + "," + num(std::abs(snap.subunit[i] - snap.subunit_synth[i])) + "\n";
    }
    return s;
}

std::string summary_csv(const std::vector<SummaryRow>& summary) {
    std::string s = "quantity,mean,max,std\n";
    for (const auto& row : summary)
        s += row.quantity + "," + num(row.mean) + "," + num(row.max) + "," + num(row.std) + "\n";
    return s;
}

void write_artifacts(const ExperimentConfig& config, const ExperimentResult& result,
                     const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_file(dir / "records.csv", records_csv(result.records));
    write_file(dir / "regions.csv", regions_csv(result.records));
    for (const auto& snap : result.snapshots)
        write_file(dir / ("grids_" + std::to_string(snap.t) + ".csv"), snapshot_csv(snap));
    if (result.records.size() > config.burn_in)
        write_file(dir / "summary.csv", summary_csv(summarize(result.records, config.burn_in)));
    write_file(dir / "plot.gp", gnuplot_script(config, result));
    write_file(dir / "config_used.txt", to_config_text(config));
}

}  // namespace phdcmp

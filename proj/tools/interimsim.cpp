#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "interimsim/calibrate.hpp"
#include "interimsim/metrics.hpp"
#include "interimsim/presets.hpp"
#include "interimsim/properties.hpp"
#include "interimsim/table_output.hpp"

using namespace interimsim;

namespace {

struct CommonFlags {
    std::string scenario;
    std::optional<std::size_t> replicates;
    std::optional<std::uint64_t> seed;
    unsigned threads = default_thread_count();
    std::string out;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool need_scenario) {
    auto* opt = cmd->add_option("--scenario,-s", f.scenario, "Scenario file or preset name");
    if (need_scenario) opt->required();
    cmd->add_option("--replicates,-n", f.replicates, "Override the replicate count");
    cmd->add_option("--seed", f.seed, "Override the seed");
    cmd->add_option("--threads,-j", f.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out,-o", f.out, "Output directory");
    cmd->add_flag("--quiet,-q", f.quiet, "No progress on stderr");
}

std::function<void(std::size_t, std::size_t)> progress_bar(const CommonFlags& f, const std::string& label) {
    if (f.quiet) return {};
    return [label](std::size_t done, std::size_t total) {
        std::cerr << "\r" << label << ": " << done << "/" << total << std::flush;
        if (done == total) std::cerr << "\n";
    };
}

ScenarioFile load_with_overrides(const CommonFlags& f) {
    ScenarioFile file = load_scenario(f.scenario);
    if (f.replicates) file.base.n_replicates = *f.replicates;
    if (f.seed) file.base.seed = *f.seed;
    if (file.base.n_replicates < 1) throw std::invalid_argument("--replicates must be >= 1");
    return file;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

CalibrationResult calibrate_base(const Scenario& base, double target, const CommonFlags& f) {
    CalibrationSpec spec;
    spec.base = base;
    spec.target_pfdr = target;
    spec.threads = f.threads;
    spec.progress = progress_bar(f, "calibrate " + base.name);
    return calibrate_cutoff(spec);
}

int cmd_run(const CommonFlags& f, double target) {
    ScenarioFile file = load_with_overrides(f);
    if (file.cutoff_auto) {
        const CalibrationResult c = calibrate_base(file.base, target, f);
        file.base.cutoff = c.cutoff;
        std::cerr << "calibrated cutoff " << format_number(c.cutoff) << " (pFDR " << c.achieved_pfdr << ")\n";
    }

    std::vector<TableRow> rows;
    int failed_cells = 0;
    for (std::size_t v = 0; v < file.n_rows(); ++v) {
        const Scenario s = file.scenario_for(v);
        const std::string label = file.row_label(v);
        try {
            RunOptions options;
            options.threads = f.threads;
            options.paired = file.run_fixed;
            options.progress = progress_bar(f, label);
            Scenario runnable = s;
            if (!file.run_adaptive) runnable = s.without_interims();
            const ScenarioRun run = run_scenario(runnable, options);
            for (const auto& fail : run.failures)
                std::cerr << label << ": replicate " << fail.replicate << " failed: " << fail.message << "\n";
            if (file.run_fixed && file.run_adaptive) {
                rows.push_back({label, false, compute_metrics(run.fixed_records)});
                rows.push_back({label, true, compute_metrics(run.records)});
            } else {
                rows.push_back({label, file.run_adaptive, compute_metrics(run.records)});
            }
        } catch (const std::exception& e) {
            std::cerr << "cell '" << label << "' failed: " << e.what() << "\n";
            ++failed_cells;
        }
    }

    const std::string csv = to_csv(rows);
    std::cout << csv;
    if (!f.out.empty()) {
        const std::filesystem::path dir(f.out);
        std::filesystem::create_directories(dir);
        const std::string stem = file.base.name;
        write_file(dir / (stem + ".csv"), csv);
        write_file(dir / (stem + ".txt"), to_text(rows));
        write_file(dir / (stem + ".full.csv"), to_csv_full_precision(rows));
    }
    if (!f.quiet) std::cerr << to_text(rows);
    return failed_cells ? 1 : 0;
}

int cmd_calibrate(const CommonFlags& f, double target) {
    const ScenarioFile file = load_with_overrides(f);
    const CalibrationResult c = calibrate_base(file.base, target, f);
    std::cout << "cutoff,achieved_pfdr,achieved_pfdr_se,band_lower,band_upper,rejections,replicates\n"
              << format_number(c.cutoff) << "," << format_number(c.achieved_pfdr) << ","
              << format_number(c.achieved_pfdr_se) << "," << format_number(c.band_lower) << ","
              << format_number(c.band_upper) << "," << c.n_reject << "," << c.n_replicates << "\n";
    return 0;
}

int cmd_properties(const CommonFlags& f, const std::string& suite, std::size_t survival_replicates, int sweeps) {
    PropertyConfig config;
    if (f.replicates) config.replicates = *f.replicates;
    if (f.seed) config.seed = *f.seed;
    config.survival_replicates = survival_replicates;
    config.geweke_sweeps = sweeps;
    config.threads = f.threads;
    if (!f.quiet) config.log = [](const std::string& msg) { std::cerr << msg << "\n"; };
    const PropertyReport r = run_property_suite(suite, config);
    std::cout << "suite,check,passed,measured,reference,tolerance,detail\n";
    for (const auto& c : r.checks)
        std::cout << r.suite << ",\"" << c.name << "\"," << (c.passed ? "pass" : "fail") << ","
                  << format_number(c.measured) << "," << format_number(c.reference) << ","
                  << format_number(c.tolerance) << ",\"" << c.detail << "\"\n";
    std::cout << r.suite << ",overall," << (r.passed() ? "pass" : "fail") << ",,,,\n";
    return r.passed() ? 0 : 1;
}

int cmd_list() {
    for (const auto& p : preset_catalog()) {
        std::string_view text = p.text;
        std::string_view first = text.substr(0, text.find('\n'));
        if (!first.empty() && first.front() == '#') first.remove_prefix(std::min<std::size_t>(2, first.size()));
        std::cout << p.name << "\t" << first << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo operating characteristics of Bayesian interim analyses"};
    app.require_subcommand(1);

    CommonFlags flags;
    double target = 0.05;
    std::string suite;
    std::size_t survival_replicates = 2000;
    int sweeps = 50;

    auto* run = app.add_subcommand("run", "Simulate every prior variant with and without interims");
    add_common(run, flags, true);
    run->add_option("--target", target, "pFDR target when the cutoff is auto");

    auto* cal = app.add_subcommand("calibrate", "Find the cutoff controlling the fixed-design pFDR");
    add_common(cal, flags, true);
    cal->add_option("--target", target, "pFDR target")->check(CLI::Range(0.0, 1.0));

    auto* props = app.add_subcommand("properties", "Run an invariant suite");
    add_common(props, flags, false);
    props->add_option("--suite", suite, "martingale, coverage, fdr-inflation, mse-inflation or mcmc-geweke")
        ->required();
    props->add_option("--survival-replicates", survival_replicates, "Replicates for MCMC endpoints");
    props->add_option("--sweeps", sweeps, "Sampler sweeps per Geweke replicate")->check(CLI::PositiveNumber);

    auto* list = app.add_subcommand("list-presets", "List bundled scenario presets");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) return cmd_run(flags, target);
        if (cal->parsed()) return cmd_calibrate(flags, target);
        if (props->parsed()) return cmd_properties(flags, suite, survival_replicates, sweeps);
        if (list->parsed()) return cmd_list();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

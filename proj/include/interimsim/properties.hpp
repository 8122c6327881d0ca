#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "interimsim/metrics.hpp"
#include "interimsim/scenario_file.hpp"

namespace interimsim {

struct PropertyConfig {
    std::size_t replicates = 50000;       // closed-form endpoints
    std::size_t survival_replicates = 2000;
    std::uint64_t seed = 20250;
    unsigned threads = 1;
    bool include_survival = true;
    bool include_rct = true;
    std::size_t geweke_replicates = 2000;
    int geweke_sweeps = 50;
    double geweke_alpha = 0.001;
    double coverage_tolerance = 0.005;
    std::function<void(const std::string&)> log;  // progress lines
};

struct PropertyCheck {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct PropertyReport {
    std::string suite;
    std::vector<PropertyCheck> checks;
    bool passed() const;
};

/* A matched-prior scenario run under the fixed and adaptive designs on shared data. */
struct MatchedRun {
    std::string label;
    Scenario scenario;
    MetricsReport fixed;
    MetricsReport adaptive;
    double mse_diff = 0.0;     // paired mean of adaptive minus fixed squared error
    double mse_diff_se = 0.0;
};

const std::vector<std::string>& property_suites();

/* Preset base scenarios with the user prior set to the generating prior. */
std::vector<Scenario> matched_scenarios(const PropertyConfig& config);
MatchedRun run_matched(const Scenario& scenario, unsigned threads);
std::vector<MatchedRun> run_matched_all(const PropertyConfig& config);

PropertyReport check_martingale(const std::vector<MatchedRun>& runs);
PropertyReport check_coverage(const std::vector<MatchedRun>& runs, double tolerance = 0.005);
PropertyReport check_fdr_inflation(const std::vector<MatchedRun>& runs);
PropertyReport check_mse_inflation(const std::vector<MatchedRun>& runs);

/*
 * Draws parameters from the prior, data given them, then runs `sweeps`
 * non-adaptive sweeps started at the true parameters. The final states are
 * independent prior draws when the sampler is correct; each parameter's
 * marginal is KS-tested against its prior.
 */
PropertyReport check_mcmc_geweke(const PropertyConfig& config);

/* Runs a suite by name; throws std::invalid_argument for unknown names. */
PropertyReport run_property_suite(const std::string& suite, const PropertyConfig& config);

}  // namespace interimsim

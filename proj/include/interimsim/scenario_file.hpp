#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "interimsim/scenario.hpp"

namespace interimsim {

/* One table row: a user prior for the experimental arm. */
struct PriorVariant {
    std::string label;
    std::optional<ArmPrior> user;
    std::optional<SurvPrior> user_surv;

    bool operator==(const PriorVariant&) const = default;
};

/*
 * A scenario document: the base scenario, the rows to run, and which designs
 * (fixed, adaptive) each row is evaluated under. With cutoff_auto the cutoff is
 * calibrated before running.
 */
struct ScenarioFile {
    Scenario base;
    bool cutoff_auto = false;
    bool run_fixed = true;
    bool run_adaptive = true;
    std::vector<PriorVariant> variants;  // empty: a single row with base.user

    bool operator==(const ScenarioFile&) const = default;

    /* Base scenario with the variant's user prior applied. */
    Scenario scenario_for(std::size_t variant) const;
    std::size_t n_rows() const { return variants.empty() ? 1 : variants.size(); }
    std::string row_label(std::size_t variant) const;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg);
    int line() const { return line_; }

private:
    int line_;
};

ScenarioFile parse_scenario(std::string_view text);
ScenarioFile load_scenario_file(const std::string& path);
std::string serialize_scenario(const ScenarioFile& file);

/* Prior expressions such as beta(3, 3), normal(0, 1), nix(0.25, 5, 5, 40), gamma(12, 2). */
ArmPrior parse_arm_prior(std::string_view expr);
std::string format_arm_prior(const ArmPrior& prior);
std::string format_number(double x);

}  // namespace interimsim

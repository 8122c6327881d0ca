#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "interimsim/conjugate.hpp"
#include "interimsim/mcmc.hpp"

namespace interimsim {

enum class Endpoint { binary, normal_known_var, normal_unknown_var, survival };
enum class Design { single_arm, rct };

/*
 * Prior for one arm of a closed-form endpoint. For generating priors a
 * NormalKnownVarPrior means theta ~ N(mu, sigma0_sq) and X ~ N(theta, sigma_sq),
 * which is also how a fixed-variance control arm of an unknown-variance trial
 * is generated.
 */
using ArmPrior = std::variant<BetaPrior, NormalKnownVarPrior, NixPrior>;

/* Full description of one simulation experiment. */
struct Scenario {
    std::string name = "scenario";
    Endpoint endpoint = Endpoint::binary;
    Design design = Design::single_arm;

    int n_max = 100;             // per arm for two-arm trials
    std::vector<int> interims;   // per arm, strictly increasing, < n_max
    double theta0 = 0.0;         // single-arm comparator
    double delta = 0.0;          // margin
    double rho = 1.0;            // hazard-ratio bound for two-arm survival
    double cutoff = 0.5;         // C

    ArmPrior generating = BetaPrior{};
    ArmPrior generating_control = BetaPrior{};
    ArmPrior user = BetaPrior{};
    ArmPrior user_control = BetaPrior{};
    SurvPrior generating_surv;
    SurvPrior user_surv;

    std::size_t n_replicates = 1000;
    std::uint64_t seed = 1;

    double accrual_rate = 6.0;       // patients per month
    double followup_months = 12.0;
    McmcConfig mcmc;

    void validate() const;
    bool is_rct() const { return design == Design::rct; }
    int n_arms() const { return is_rct() ? 2 : 1; }
    int n_analyses() const { return static_cast<int>(interims.size()) + 1; }
    /* Per-arm sample size at analysis j; the last analysis is at n_max. */
    int analysis_size(int j) const;

    /* Copy with the user prior replaced by the data-generating prior (control user prior kept). */
    Scenario with_matched_prior() const;
    Scenario without_interims() const;

    bool operator==(const Scenario&) const = default;
};

std::string_view to_string(Endpoint e);
std::string_view to_string(Design d);
Endpoint parse_endpoint(std::string_view s);
Design parse_design(std::string_view s);

}  // namespace interimsim

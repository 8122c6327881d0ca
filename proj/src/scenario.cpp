#include "interimsim/scenario.hpp"

#include <stdexcept>
#include <string>

namespace interimsim {

namespace {

void fail(const std::string& msg) {
    throw std::invalid_argument("Scenario: " + msg);
}

void validate_arm_prior(const ArmPrior& p) {
    std::visit([](const auto& v) { v.validate(); }, p);
}

template <class T>
void require_family(const ArmPrior& p, const char* what) {
    if (!std::holds_alternative<T>(p)) fail(std::string(what) + " has the wrong prior family for this endpoint");
}

}  // namespace

void Scenario::validate() const {
    if (n_max < 1) fail("n_max must be >= 1");
    for (std::size_t i = 0; i < interims.size(); ++i) {
        if (interims[i] < 1 || interims[i] >= n_max) fail("interim sizes must lie in [1, n_max)");
        if (i > 0 && interims[i] <= interims[i - 1]) fail("interim schedule must be strictly increasing");
    }
    if (!(cutoff > 0.0 && cutoff <= 1.0)) fail("cutoff must lie in (0, 1]");

    switch (endpoint) {
    case Endpoint::binary:
        require_family<BetaPrior>(generating, "generating prior");
        require_family<BetaPrior>(user, "user prior");
        if (is_rct()) {
            require_family<BetaPrior>(generating_control, "control generating prior");
            require_family<BetaPrior>(user_control, "control user prior");
        }
        break;
    case Endpoint::normal_known_var:
        require_family<NormalKnownVarPrior>(generating, "generating prior");
        require_family<NormalKnownVarPrior>(user, "user prior");
        if (is_rct()) {
            require_family<NormalKnownVarPrior>(generating_control, "control generating prior");
            require_family<NormalKnownVarPrior>(user_control, "control user prior");
        }
        break;
    case Endpoint::normal_unknown_var:
        if (std::holds_alternative<BetaPrior>(generating)) fail("generating prior must be normal");
        require_family<NixPrior>(user, "user prior");
        if (is_rct()) {
            if (std::holds_alternative<BetaPrior>(generating_control)) fail("control generating prior must be normal");
            require_family<NixPrior>(user_control, "control user prior");
        }
        break;
    case Endpoint::survival:
        generating_surv.validate();
        user_surv.validate();
        if (!(accrual_rate > 0.0)) fail("accrual_rate must be positive");
        if (!(followup_months >= 0.0)) fail("followup_months must be nonnegative");
        if (is_rct() && !(rho > 0.0)) fail("rho must be positive");
        mcmc.validate();
        break;
    }
    if (endpoint != Endpoint::survival) {
        validate_arm_prior(generating);
        validate_arm_prior(user);
        if (is_rct()) {
            validate_arm_prior(generating_control);
            validate_arm_prior(user_control);
        }
    }
}

int Scenario::analysis_size(int j) const {
    if (j < 0 || j >= n_analyses()) throw std::out_of_range("Scenario::analysis_size");
    return j < static_cast<int>(interims.size()) ? interims[j] : n_max;
}

Scenario Scenario::with_matched_prior() const {
    Scenario s = *this;
    if (endpoint == Endpoint::survival) {
        s.user_surv = generating_surv;
        return s;
    }
    if (const auto* nk = std::get_if<NormalKnownVarPrior>(&generating); nk && endpoint == Endpoint::normal_unknown_var)
        throw std::invalid_argument("with_matched_prior: a fixed-variance generating prior has no NIX match");
    s.user = generating;
    return s;
}

Scenario Scenario::without_interims() const {
    Scenario s = *this;
    s.interims.clear();
    return s;
}

std::string_view to_string(Endpoint e) {
    switch (e) {
    case Endpoint::binary: return "binary";
    case Endpoint::normal_known_var: return "normal_known_var";
    case Endpoint::normal_unknown_var: return "normal_unknown_var";
    case Endpoint::survival: return "survival";
    }
    return "?";
}

std::string_view to_string(Design d) {
    return d == Design::rct ? "rct" : "single_arm";
}

Endpoint parse_endpoint(std::string_view s) {
    for (auto e : {Endpoint::binary, Endpoint::normal_known_var, Endpoint::normal_unknown_var, Endpoint::survival})
        if (to_string(e) == s) return e;
    throw std::invalid_argument("unknown endpoint '" + std::string(s) + "'");
}

Design parse_design(std::string_view s) {
    if (s == "single_arm") return Design::single_arm;
    if (s == "rct") return Design::rct;
    throw std::invalid_argument("unknown design '" + std::string(s) + "'");
}

}  // namespace interimsim

#pragma once

#include "interimsim/specfun.hpp"

namespace interimsim {

/* Inferential output of one analysis, on the scale of the target estimand. */
struct PosteriorSummary {
    double prob_superior = 0.0;  // Pr(H_a | D)
    double post_mean = 0.0;
    Interval ci_one_sided;       // 95% one-sided, oriented toward H_a
    Interval ci_symmetric;       // (2.5%, 97.5%)
    bool mean_defined = true;    // false when the t marginal has dof <= 1

    bool operator==(const PosteriorSummary&) const = default;
};

enum class CiKind { one_sided, symmetric };

}  // namespace interimsim

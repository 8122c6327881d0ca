#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "interimsim/engine.hpp"

namespace interimsim {

/* Operating characteristics of one design, with Monte Carlo standard errors. */
struct MetricsReport {
    std::optional<double> pfdr;  // absent when nothing was rejected
    double fdr = 0.0;
    double type1_a = 0.0;
    double type1_b = 0.0;
    double power = 0.0;
    double bias = 0.0;
    double mse = 0.0;
    double coverage_one_sided = 0.0;
    double coverage_symmetric = 0.0;
    double mean_sample_size = 0.0;  // all arms

    double pfdr_se = 0.0;
    double fdr_se = 0.0;
    double type1_a_se = 0.0;
    double type1_b_se = 0.0;
    double power_se = 0.0;
    double bias_se = 0.0;
    double mse_se = 0.0;
    double coverage_one_sided_se = 0.0;
    double coverage_symmetric_se = 0.0;
    double mean_sample_size_se = 0.0;

    std::size_t n_reject = 0;
    std::size_t n_false_reject = 0;
    std::size_t n_h0 = 0;
    std::size_t n_h1 = 0;
    std::size_t n_replicates = 0;
    std::size_t n_mean_undefined = 0;  // excluded from bias and MSE
};

/* Binomial standard error sqrt(p(1-p)/n); 0 when n == 0. */
double proportion_se(double p, std::size_t n);

MetricsReport compute_metrics(const std::vector<TrialRecord>& records);

struct InflationVerdict {
    bool inflated = false;    // adaptive strictly above fixed on every compared rate
    bool consistent = false;  // adaptive not below fixed by more than 3 pooled SE
    double type1_a_diff = 0.0;
    double type1_a_slack = 0.0;
    std::optional<double> pfdr_diff;
    double pfdr_slack = 0.0;
};

/* Type I A is always compared; pFDR only when `matched`. */
InflationVerdict fdr_inflation_check(const MetricsReport& fixed, const MetricsReport& adaptive, bool matched = true);

}  // namespace interimsim

#pragma once

#include <functional>
#include <limits>
#include <span>

#include "interimsim/rng.hpp"

namespace interimsim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/* Closed interval [lower, upper]; either end may be infinite. */
struct Interval {
    double lower = -kInf;
    double upper = kInf;

    bool contains(double x) const { return lower <= x && x <= upper; }
    bool operator==(const Interval&) const = default;
};

// Distribution functions. Domain violations throw std::invalid_argument.
double reg_inc_beta(double x, double a, double b);
double beta_quantile(double p, double a, double b);
double beta_log_density(double x, double a, double b);

double normal_cdf(double z);
double normal_quantile(double p);

double student_t_cdf(double x, double dof);
double student_t_quantile(double p, double dof);
double student_t_log_density(double x, double dof);

/* Lower regularized incomplete gamma P(shape, rate * x). */
double gamma_cdf(double x, double shape, double rate);

// Random variates. Shape, scale, rate, and dof arguments must be > 0.
double sample_normal(RngStream& rng, double mean = 0.0, double sd = 1.0);
double sample_gamma(RngStream& rng, double shape, double rate);
double sample_beta(RngStream& rng, double a, double b);
double sample_exponential(RngStream& rng, double rate);
/* Scaled inverse chi-square: nu * s2 / chi2_nu. */
double sample_inv_chi2(RngStream& rng, double nu, double s2);
/* Weibull with median `median` and shape `shape`: S(t) = exp(-ln2 (t/median)^shape). */
double sample_weibull_median(RngStream& rng, double median, double shape);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/* One-sample Kolmogorov-Smirnov test; `sample` is sorted in place. */
KsResult ks_test(std::span<double> sample, const std::function<double(double)>& cdf);

/* Asymptotic Kolmogorov survival function with the Stephens small-n correction. */
double kolmogorov_pvalue(double statistic, std::size_t n);

}  // namespace interimsim

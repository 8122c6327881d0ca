#include "interimsim/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace interimsim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_probability(double p, const char* what) {
    require(p >= 0.0 && p <= 1.0, what);
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
    require(x >= 0.0 && x <= 1.0, "reg_inc_beta: x outside [0, 1]");
    require(a > 0.0 && b > 0.0, "reg_inc_beta: shape parameters must be positive");
    return boost::math::ibeta(a, b, x);
}

double beta_quantile(double p, double a, double b) {
    require_probability(p, "beta_quantile: p outside [0, 1]");
    require(a > 0.0 && b > 0.0, "beta_quantile: shape parameters must be positive");
    return boost::math::ibeta_inv(a, b, p);
}

double beta_log_density(double x, double a, double b) {
    if (x <= 0.0 || x >= 1.0) return -kInf;
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - std::lgamma(a) - std::lgamma(b) +
           std::lgamma(a + b);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double normal_quantile(double p) {
    require_probability(p, "normal_quantile: p outside [0, 1]");
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

double student_t_cdf(double x, double dof) {
    require(dof > 0.0, "student_t_cdf: dof must be positive");
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return boost::math::cdf(boost::math::students_t_distribution<double>(dof), x);
}

double student_t_quantile(double p, double dof) {
    require(dof > 0.0, "student_t_quantile: dof must be positive");
    require_probability(p, "student_t_quantile: p outside [0, 1]");
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    return boost::math::quantile(boost::math::students_t_distribution<double>(dof), p);
}

double student_t_log_density(double x, double dof) {
    return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
           0.5 * std::log(dof * M_PI) - 0.5 * (dof + 1.0) * std::log1p(x * x / dof);
}

double gamma_cdf(double x, double shape, double rate) {
    require(shape > 0.0 && rate > 0.0, "gamma_cdf: shape and rate must be positive");
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(shape, rate * x);
}

double sample_normal(RngStream& rng, double mean, double sd) {
    require(sd > 0.0, "sample_normal: sd must be positive");
    std::normal_distribution<double> dist(mean, sd);
    return dist(rng);
}

double sample_gamma(RngStream& rng, double shape, double rate) {
    require(shape > 0.0 && rate > 0.0, "sample_gamma: shape and rate must be positive");
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    return dist(rng);
}

double sample_beta(RngStream& rng, double a, double b) {
    require(a > 0.0 && b > 0.0, "sample_beta: shape parameters must be positive");
    if (a >= 1.0 && b >= 1.0) {
        const double x = sample_gamma(rng, a, 1.0);
        const double y = sample_gamma(rng, b, 1.0);
        return x / (x + y);
    }
    // Small shapes underflow Gamma(a) draws; work with log G(a) = log G(a+1) + log(U)/a.
    const double log_x = std::log(sample_gamma(rng, a + 1.0, 1.0)) + std::log(rng.uniform()) / a;
    const double log_y = std::log(sample_gamma(rng, b + 1.0, 1.0)) + std::log(rng.uniform()) / b;
    const double m = std::max(log_x, log_y);
    const double ex = std::exp(log_x - m);
    const double ey = std::exp(log_y - m);
    return ex / (ex + ey);
}

double sample_exponential(RngStream& rng, double rate) {
    require(rate > 0.0, "sample_exponential: rate must be positive");
    return -std::log(rng.uniform()) / rate;
}

double sample_inv_chi2(RngStream& rng, double nu, double s2) {
    require(nu > 0.0 && s2 > 0.0, "sample_inv_chi2: nu and s2 must be positive");
    const double chi2 = 2.0 * sample_gamma(rng, 0.5 * nu, 1.0);
    return nu * s2 / chi2;
}

double sample_weibull_median(RngStream& rng, double median, double shape) {
    require(median > 0.0 && shape > 0.0, "sample_weibull_median: median and shape must be positive");
    return median * std::pow(-std::log(rng.uniform()) / std::log(2.0), 1.0 / shape);
}

double kolmogorov_pvalue(double statistic, std::size_t n) {
    if (n == 0) return 1.0;
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<double> sample, const std::function<double(double)>& cdf) {
    KsResult out;
    const std::size_t n = sample.size();
    if (n == 0) return out;
    std::sort(sample.begin(), sample.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    out.statistic = d;
    out.p_value = kolmogorov_pvalue(d, n);
    return out;
}

}  // namespace interimsim

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "interimsim/specfun.hpp"
#include "oracles.hpp"

using namespace interimsim;

TEST_CASE("reg_inc_beta trivial values") {
    CHECK(reg_inc_beta(0.5, 1, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(reg_inc_beta(0.5, 2, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(reg_inc_beta(0.0, 3, 4) == 0.0);
    CHECK(reg_inc_beta(1.0, 3, 4) == 1.0);
    CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(reg_inc_beta(1.5, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("reg_inc_beta matches quadrature of the beta density") {
    const double oracle_value = oracle::simpson([](double x) { return oracle::beta_pdf(x, 33, 13); }, 0.0, 0.6, 1e-15);
    CHECK(std::abs(reg_inc_beta(0.6, 33, 13) - oracle_value) < 1e-12);
    const double v2 = oracle::simpson([](double x) { return oracle::beta_pdf(x, 2.5, 7.25); }, 0.0, 0.3, 1e-15);
    CHECK(std::abs(reg_inc_beta(0.3, 2.5, 7.25) - v2) < 1e-12);
}

TEST_CASE("reg_inc_beta reflection identity on random arguments") {
    RngStream r(11, 0);
    for (int i = 0; i < 1000; ++i) {
        const double x = r.uniform(), a = 0.05 + 50 * r.uniform(), b = 0.05 + 50 * r.uniform();
        REQUIRE(std::abs(reg_inc_beta(x, a, b) + reg_inc_beta(1 - x, b, a) - 1.0) < 1e-10);
    }
}

TEST_CASE("normal_cdf against the erf series") {
    CHECK(normal_cdf(0.0) == 0.5);
    for (double z : {-2.5, -1.0, 0.3, 1.0, 1.96, 2.7}) {
        CHECK(std::abs(normal_cdf(z) - oracle::phi_series(z)) < 1e-12);
        CHECK(std::abs(normal_cdf(z) + normal_cdf(-z) - 1.0) < 1e-15);
    }
    CHECK(std::abs(normal_cdf(1.96) - 0.9750021048517795) < 1e-10);
}

TEST_CASE("quantiles invert their CDFs") {
    for (double p : {1e-6, 0.025, 0.3, 0.5, 0.95, 0.999}) {
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
        CHECK(reg_inc_beta(beta_quantile(p, 3.5, 0.7), 3.5, 0.7) == doctest::Approx(p).epsilon(1e-10));
        CHECK(student_t_cdf(student_t_quantile(p, 4.5), 4.5) == doctest::Approx(p).epsilon(1e-10));
    }
}

TEST_CASE("student_t_cdf") {
    CHECK(student_t_cdf(0.0, 3.3) == 0.5);
    CHECK(std::abs(student_t_cdf(1.0, 1.0) - 0.75) < 1e-12);
    CHECK(std::abs(student_t_cdf(1.5, 105) - normal_cdf(1.5)) < 2e-3);
    const double oracle_value = 0.5 + oracle::simpson([](double x) { return oracle::t_pdf(x, 6.7); }, 0.0, 1.3, 1e-15);
    CHECK(std::abs(student_t_cdf(1.3, 6.7) - oracle_value) < 1e-10);
    CHECK_THROWS_AS(student_t_cdf(1.0, 0.0), std::invalid_argument);
    CHECK(std::abs(std::exp(student_t_log_density(0.7, 6.7)) - oracle::t_pdf(0.7, 6.7)) < 1e-14);
}

TEST_CASE("gamma_cdf against quadrature") {
    const double v = oracle::simpson([](double x) { return oracle::gamma_pdf(x, 12, 2); }, 0.0, 8.0, 1e-15);
    CHECK(std::abs(gamma_cdf(8.0, 12, 2) - v) < 1e-12);
    CHECK(gamma_cdf(0.0, 3, 1) == 0.0);
}

TEST_CASE("sampler moments") {
    RngStream r(3, 0);
    const int n = 1000000;
    SUBCASE("weibull median") {
        std::vector<double> xs(n);
        for (auto& x : xs) x = sample_weibull_median(r, 8.0, 4.0);
        std::nth_element(xs.begin(), xs.begin() + n / 2, xs.end());
        CHECK(std::abs(xs[n / 2] - 8.0) < 0.02);
    }
    SUBCASE("inverse chi-square mean") {
        double sum = 0;
        for (int i = 0; i < n; ++i) sum += sample_inv_chi2(r, 5, 40);
        CHECK(sum / n == doctest::Approx(200.0 / 3.0).epsilon(0.01));
    }
    SUBCASE("beta(3,3) mean and variance") {
        double s = 0, ss = 0;
        for (int i = 0; i < n; ++i) {
            const double x = sample_beta(r, 3, 3);
            s += x;
            ss += x * x;
        }
        const double m = s / n, v = ss / n - m * m;
        CHECK(std::abs(m - 0.5) < 0.002);
        CHECK(v == doctest::Approx(1.0 / 28.0).epsilon(0.02));
    }
    SUBCASE("exponential mean") {
        double s = 0;
        for (int i = 0; i < n; ++i) s += sample_exponential(r, 6.0);
        CHECK(s / n == doctest::Approx(1.0 / 6.0).epsilon(0.01));
    }
}

TEST_CASE("samplers pass KS tests against their CDFs") {
    RngStream params(99, 0);
    const int n = 100000;
    for (int k = 0; k < 20; ++k) {
        RngStream r(17, static_cast<std::uint64_t>(k));
        const double a = 0.2 + 10 * params.uniform(), b = 0.2 + 10 * params.uniform();
        std::vector<double> xs(n);
        CAPTURE(a);
        CAPTURE(b);

        for (auto& x : xs) x = sample_beta(r, a, b);
        CHECK(ks_test(xs, [&](double x) { return reg_inc_beta(std::clamp(x, 0.0, 1.0), a, b); }).p_value > 0.001);

        for (auto& x : xs) x = sample_gamma(r, a, b);
        CHECK(ks_test(xs, [&](double x) { return gamma_cdf(x, a, b); }).p_value > 0.001);

        for (auto& x : xs) x = sample_normal(r, a, b);
        CHECK(ks_test(xs, [&](double x) { return normal_cdf((x - a) / b); }).p_value > 0.001);

        for (auto& x : xs) x = sample_weibull_median(r, a, b);
        CHECK(ks_test(xs, [&](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-std::log(2.0) * std::pow(x / a, b)); })
                  .p_value > 0.001);

        for (auto& x : xs) x = sample_inv_chi2(r, a, b);
        // nu s2 / X ~ chi2_nu, so Pr(X <= x) = Pr(chi2 >= nu s2 / x).
        CHECK(ks_test(xs, [&](double x) { return x <= 0 ? 0.0 : 1.0 - gamma_cdf(a * b / x, a / 2, 0.5); }).p_value >
              0.001);
    }
}

TEST_CASE("samplers reject nonpositive parameters") {
    RngStream r(1, 1);
    CHECK_THROWS_AS(sample_beta(r, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_gamma(r, 1, -1), std::invalid_argument);
    CHECK_THROWS_AS(sample_weibull_median(r, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_inv_chi2(r, 1, 0), std::invalid_argument);
}

TEST_CASE("ks_test detects a wrong distribution") {
    RngStream r(8, 0);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = sample_normal(r, 0.1, 1.0);
    CHECK(ks_test(xs, [](double x) { return normal_cdf(x); }).p_value < 0.001);
    CHECK(kolmogorov_pvalue(0.0, 100) == doctest::Approx(1.0));
}

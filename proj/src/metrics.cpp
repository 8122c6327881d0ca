#include "interimsim/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace interimsim {

namespace {

constexpr double kSlackSe = 3.0;

/* Mean and standard error of the mean. */
struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++n;
    }
    double mean() const { return n ? sum / n : 0.0; }
    double se() const {
        if (n < 2) return 0.0;
        const double m = mean();
        const double var = std::max(0.0, (sum_sq - n * m * m) / (n - 1.0));
        return std::sqrt(var / n);
    }
};

double ratio(std::size_t num, std::size_t den) {
    return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace

double proportion_se(double p, std::size_t n) {
    return n ? std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n)) : 0.0;
}

MetricsReport compute_metrics(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw std::invalid_argument("compute_metrics: no records");

    MetricsReport m;
    m.n_replicates = records.size();
    std::size_t true_reject = 0, h0_one_sided_hits = 0, one_sided_hits = 0, symmetric_hits = 0;
    Moments err, sq_err, size;
    for (const auto& r : records) {
        if (r.h0_true) {
            ++m.n_h0;
            if (r.rejected) ++m.n_false_reject;
            if (r.summary.ci_one_sided.contains(r.true_value)) ++h0_one_sided_hits;
        } else {
            ++m.n_h1;
            if (r.rejected) ++true_reject;
        }
        if (r.rejected) ++m.n_reject;
        if (r.summary.ci_one_sided.contains(r.true_value)) ++one_sided_hits;
        if (r.summary.ci_symmetric.contains(r.true_value)) ++symmetric_hits;
        if (r.summary.mean_defined) {
            const double e = r.summary.post_mean - r.true_value;
            err.add(e);
            sq_err.add(e * e);
        } else {
            ++m.n_mean_undefined;
        }
        size.add(r.final_n);
    }

    const std::size_t n = m.n_replicates;
    if (m.n_reject > 0) {
        m.pfdr = ratio(m.n_false_reject, m.n_reject);
        m.pfdr_se = proportion_se(*m.pfdr, m.n_reject);
    }
    m.fdr = ratio(m.n_false_reject, n);
    m.fdr_se = proportion_se(m.fdr, n);
    m.type1_a = ratio(m.n_false_reject, m.n_h0);
    m.type1_a_se = proportion_se(m.type1_a, m.n_h0);
    m.type1_b = m.n_h0 ? 1.0 - ratio(h0_one_sided_hits, m.n_h0) : 0.0;
    m.type1_b_se = proportion_se(m.type1_b, m.n_h0);
    m.power = ratio(true_reject, m.n_h1);
    m.power_se = proportion_se(m.power, m.n_h1);
    m.bias = err.mean();
    m.bias_se = err.se();
    m.mse = sq_err.mean();
    m.mse_se = sq_err.se();
    m.coverage_one_sided = ratio(one_sided_hits, n);
    m.coverage_one_sided_se = proportion_se(m.coverage_one_sided, n);
    m.coverage_symmetric = ratio(symmetric_hits, n);
    m.coverage_symmetric_se = proportion_se(m.coverage_symmetric, n);
    m.mean_sample_size = size.mean();
    m.mean_sample_size_se = size.se();
    return m;
}

InflationVerdict fdr_inflation_check(const MetricsReport& fixed, const MetricsReport& adaptive, bool matched) {
    InflationVerdict v;
    v.type1_a_diff = adaptive.type1_a - fixed.type1_a;
    v.type1_a_slack = kSlackSe * std::hypot(fixed.type1_a_se, adaptive.type1_a_se);
    v.inflated = v.type1_a_diff > 0.0;
    v.consistent = v.type1_a_diff >= -v.type1_a_slack;
    if (matched) {
        if (fixed.pfdr && adaptive.pfdr) {
            v.pfdr_diff = *adaptive.pfdr - *fixed.pfdr;
            v.pfdr_slack = kSlackSe * std::hypot(fixed.pfdr_se, adaptive.pfdr_se);
            v.inflated = v.inflated && *v.pfdr_diff > 0.0;
            v.consistent = v.consistent && *v.pfdr_diff >= -v.pfdr_slack;
        } else {
            v.inflated = v.inflated && adaptive.pfdr.has_value();
        }
    }
    return v;
}

}  // namespace interimsim

#include "interimsim/properties.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "interimsim/presets.hpp"
#include "interimsim/specfun.hpp"

namespace interimsim {

namespace {

constexpr double kBiasSe = 3.0;
constexpr double kNominalCoverage = 0.95;
constexpr int kGewekePatients = 20;
constexpr double kGewekeCensorMax = 20.0;

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

void say(const PropertyConfig& config, const std::string& msg) {
    if (config.log) config.log(msg);
}

PropertyCheck bias_check(const std::string& name, const MetricsReport& m) {
    PropertyCheck c;
    c.name = name;
    c.measured = m.bias;
    c.reference = 0.0;
    c.tolerance = kBiasSe * m.bias_se;
    c.passed = std::abs(m.bias) < c.tolerance;
    c.detail = "bias " + fmt(m.bias) + ", 3 SE " + fmt(c.tolerance);
    return c;
}

PropertyCheck coverage_check(const std::string& name, double coverage, double se, double tolerance, bool mc_floor) {
    PropertyCheck c;
    c.name = name;
    c.measured = coverage;
    c.reference = kNominalCoverage;
    c.tolerance = mc_floor ? std::max(tolerance, kBiasSe * se) : tolerance;
    c.passed = std::abs(coverage - kNominalCoverage) <= c.tolerance;
    c.detail = "coverage " + fmt(coverage) + " (SE " + fmt(se) + ")";
    return c;
}

}  // namespace

bool PropertyReport::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const std::vector<std::string>& property_suites() {
    static const std::vector<std::string> suites{"martingale", "coverage", "fdr-inflation", "mse-inflation",
                                                 "mcmc-geweke"};
    return suites;
}

std::vector<Scenario> matched_scenarios(const PropertyConfig& config) {
    std::vector<std::string> names{"table2", "table3", "table4"};
    if (config.include_survival) names.push_back("table5");
    if (config.include_rct) {
        names.insert(names.end(), {"s3", "s4", "s5"});
        if (config.include_survival) names.push_back("s6");
    }
    std::vector<Scenario> out;
    for (const auto& name : names) {
        Scenario s = load_scenario(name).base.with_matched_prior();
        s.name = name + " matched";
        s.seed = config.seed;
        s.n_replicates = s.endpoint == Endpoint::survival ? config.survival_replicates : config.replicates;
        out.push_back(std::move(s));
    }
    return out;
}

MatchedRun run_matched(const Scenario& scenario, unsigned threads) {
    RunOptions options;
    options.threads = threads;
    options.paired = true;
    const ScenarioRun run = run_scenario(scenario, options);
    MatchedRun m;
    m.label = scenario.name;
    m.scenario = scenario;
    m.fixed = compute_metrics(run.fixed_records);
    m.adaptive = compute_metrics(run.records);

    double sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < run.records.size(); ++i) {
        const auto& a = run.records[i];
        const auto& f = run.fixed_records[i];
        if (!a.summary.mean_defined || !f.summary.mean_defined) continue;
        const double ea = a.summary.post_mean - a.true_value, ef = f.summary.post_mean - f.true_value;
        const double d = ea * ea - ef * ef;
        sum += d;
        sum_sq += d * d;
        ++n;
    }
    if (n > 1) {
        m.mse_diff = sum / n;
        m.mse_diff_se = std::sqrt(std::max(0.0, (sum_sq - n * m.mse_diff * m.mse_diff) / (n - 1.0)) / n);
    }
    return m;
}

std::vector<MatchedRun> run_matched_all(const PropertyConfig& config) {
    std::vector<MatchedRun> out;
    for (const auto& s : matched_scenarios(config)) {
        say(config, "running " + s.name + " (" + std::to_string(s.n_replicates) + " replicates)");
        out.push_back(run_matched(s, config.threads));
    }
    return out;
}

PropertyReport check_martingale(const std::vector<MatchedRun>& runs) {
    PropertyReport r{"martingale", {}};
    for (const auto& m : runs) {
        r.checks.push_back(bias_check(m.label + " fixed: |bias| < 3 SE", m.fixed));
        r.checks.push_back(bias_check(m.label + " adaptive: |bias| < 3 SE", m.adaptive));
    }
    return r;
}

PropertyReport check_coverage(const std::vector<MatchedRun>& runs, double tolerance) {
    PropertyReport r{"coverage", {}};
    for (const auto& m : runs) {
        const bool mcmc = m.scenario.endpoint == Endpoint::survival;
        for (const auto& [design, rep] : {std::pair{"fixed", &m.fixed}, std::pair{"adaptive", &m.adaptive}}) {
            const std::string base = m.label + " " + design;
            r.checks.push_back(coverage_check(base + " one-sided", rep->coverage_one_sided, rep->coverage_one_sided_se,
                                              tolerance, mcmc));
            r.checks.push_back(coverage_check(base + " symmetric", rep->coverage_symmetric,
                                              rep->coverage_symmetric_se, tolerance, mcmc));
        }
    }
    return r;
}

PropertyReport check_fdr_inflation(const std::vector<MatchedRun>& runs) {
    PropertyReport r{"fdr-inflation", {}};
    for (const auto& m : runs) {
        const InflationVerdict v = fdr_inflation_check(m.fixed, m.adaptive, true);
        PropertyCheck c;
        c.name = m.label + ": adaptive pFDR and Type I A not below fixed";
        c.passed = v.consistent;
        c.measured = v.pfdr_diff.value_or(0.0);
        c.tolerance = v.pfdr_slack;
        std::ostringstream d;
        d << "pFDR " << (m.fixed.pfdr ? fmt(*m.fixed.pfdr) : "NA") << " -> "
          << (m.adaptive.pfdr ? fmt(*m.adaptive.pfdr) : "NA") << ", Type I A " << fmt(m.fixed.type1_a) << " -> "
          << fmt(m.adaptive.type1_a) << (v.inflated ? ", inflated" : ", not inflated");
        c.detail = d.str();
        r.checks.push_back(c);
    }
    return r;
}

PropertyReport check_mse_inflation(const std::vector<MatchedRun>& runs) {
    PropertyReport r{"mse-inflation", {}};
    for (const auto& m : runs) {
        PropertyCheck c;
        c.name = m.label + ": MSE adaptive >= MSE fixed";
        c.measured = m.adaptive.mse - m.fixed.mse;
        c.passed = m.adaptive.mse >= m.fixed.mse;
        c.detail = "MSE " + fmt(m.fixed.mse) + " -> " + fmt(m.adaptive.mse) + ", paired diff " + fmt(m.mse_diff) +
                   " (SE " + fmt(m.mse_diff_se) + ")";
        r.checks.push_back(c);
    }
    return r;
}

PropertyReport check_mcmc_geweke(const PropertyConfig& config) {
    PropertyReport r{"mcmc-geweke", {}};
    const SurvPrior prior{12.0, 2.0, 8.0, 2.0, 0.0, 1.0};
    const Eigen::Vector3d scales(0.15, 0.15, 0.4);
    for (const bool rct : {false, true}) {
        const std::size_t n = config.geweke_replicates;
        std::vector<double> theta(n), kappa(n), beta(n);
        const auto errors = parallel_for(n, config.threads, [&](std::size_t i) {
            RngStream rng(config.seed, i, rct ? 2 : 1);
            const WeibullChain::State truth = draw_from_prior(prior, rct, rng);
            SurvData data;
            for (int p = 0; p < kGewekePatients; ++p) {
                const int arm = rct ? p % 2 : 1;
                const double lin = (rct && arm == 1) ? truth.beta : 0.0;
                const double t = sample_weibull_median(rng, truth.theta * std::exp(-lin / truth.kappa), truth.kappa);
                const double censor = kGewekeCensorMax * rng.uniform();
                data.push_back({std::min(t, censor), t <= censor, arm});
            }
            WeibullChain chain(prior, data, rct);
            if (!chain.set_state(truth)) throw McmcError("geweke: true state has non-finite posterior");
            Eigen::Vector3d accepted = Eigen::Vector3d::Zero();
            for (int s = 0; s < config.geweke_sweeps; ++s) chain.sweep(rng, scales, accepted);
            theta[i] = chain.state().theta;
            kappa[i] = chain.state().kappa;
            beta[i] = chain.state().beta;
        });
        for (const auto& e : errors)
            if (!e.empty()) throw McmcError(e);

        const std::string tag = rct ? "two-arm " : "single-arm ";
        auto add = [&](const std::string& name, std::vector<double>& xs, std::function<double(double)> cdf) {
            const KsResult ks = ks_test(xs, cdf);
            PropertyCheck c;
            c.name = tag + name + " marginal matches prior (KS)";
            c.measured = ks.p_value;
            c.reference = config.geweke_alpha;
            c.passed = ks.p_value >= config.geweke_alpha;
            c.detail = "D = " + fmt(ks.statistic) + ", p = " + fmt(ks.p_value) + ", n = " + std::to_string(xs.size()) +
                       ", sweeps = " + std::to_string(config.geweke_sweeps);
            r.checks.push_back(c);
        };
        add("theta", theta, [&](double x) { return gamma_cdf(x, prior.theta_shape, prior.theta_rate); });
        add("kappa", kappa, [&](double x) { return gamma_cdf(x, prior.kappa_shape, prior.kappa_rate); });
        if (rct)
            add("beta", beta, [&](double x) { return normal_cdf((x - prior.beta_mean) / std::sqrt(prior.beta_var)); });
    }
    return r;
}

PropertyReport run_property_suite(const std::string& suite, const PropertyConfig& config) {
    if (suite == "mcmc-geweke") return check_mcmc_geweke(config);
    const auto& names = property_suites();
    if (std::find(names.begin(), names.end(), suite) == names.end())
        throw std::invalid_argument("unknown property suite '" + suite + "'");
    const auto runs = run_matched_all(config);
    if (suite == "martingale") return check_martingale(runs);
    if (suite == "coverage") return check_coverage(runs, config.coverage_tolerance);
    if (suite == "fdr-inflation") return check_fdr_inflation(runs);
    return check_mse_inflation(runs);
}

}  // namespace interimsim

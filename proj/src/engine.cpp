#include "interimsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <thread>

#include "interimsim/specfun.hpp"

namespace interimsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::uint32_t kMcmcSubstreamBase = 1;

struct ArmTruth {
    double theta = 0.0;
    double sigma_sq = 1.0;
};

ArmTruth draw_arm(const ArmPrior& prior, RngStream& rng) {
    return std::visit(overloaded{[&](const BetaPrior& b) { return ArmTruth{sample_beta(rng, b.alpha, b.beta), 1.0}; },
                                 [&](const NormalKnownVarPrior& n) {
                                     return ArmTruth{sample_normal(rng, n.mu, std::sqrt(n.sigma0_sq)), n.sigma_sq};
                                 },
                                 [&](const NixPrior& p) {
                                     const double s2 = sample_inv_chi2(rng, p.nu, p.sigma0_sq);
                                     return ArmTruth{sample_normal(rng, p.mu, std::sqrt(s2 / p.kappa)), s2};
                                 }},
                      prior);
}

/* Prefix sufficient statistics of one arm's N_max observations. */
struct ArmData {
    std::vector<long> successes;    // binary: successes among first n
    std::vector<NormalData> stats;  // normal: stats of first n

    void generate(Endpoint endpoint, const ArmTruth& truth, int n_max, RngStream& rng) {
        if (endpoint == Endpoint::binary) {
            successes.assign(n_max + 1, 0);
            for (int i = 1; i <= n_max; ++i) successes[i] = successes[i - 1] + (rng.uniform() < truth.theta ? 1 : 0);
        } else {
            stats.assign(n_max + 1, NormalData{});
            const double sd = std::sqrt(truth.sigma_sq);
            for (int i = 1; i <= n_max; ++i) {
                stats[i] = stats[i - 1];
                stats[i].add(sample_normal(rng, truth.theta, sd));
            }
        }
    }
};

Posterior arm_posterior(Endpoint endpoint, const ArmPrior& user, const ArmData& data, int n) {
    switch (endpoint) {
    case Endpoint::binary:
        return beta_posterior(std::get<BetaPrior>(user), BinaryData{n, data.successes[n]});
    case Endpoint::normal_known_var:
        return normal_known_posterior(std::get<NormalKnownVarPrior>(user), data.stats[n]);
    case Endpoint::normal_unknown_var:
        return nix_posterior(std::get<NixPrior>(user), data.stats[n]);
    case Endpoint::survival:
        break;
    }
    throw std::logic_error("arm_posterior: survival has no closed form");
}

/* One replicate: truth, full data stream, and lazily evaluated analyses. */
class TrialSimulator {
public:
    TrialSimulator(const Scenario& s, std::size_t replicate)
        : s_(s),
          base_(s.seed, replicate),
          probs_(static_cast<std::size_t>(s.n_analyses())),
          analyses_(static_cast<std::size_t>(s.n_analyses())) {
        truth_ = draw_truth(s_, base_);
        if (s_.endpoint == Endpoint::survival) {
            plan_ = build_accrual(s_, base_);
            times_ = analysis_times(s_, plan_);
            event_times_.reserve(plan_.arrivals.size());
            for (int arm : plan_.arms) {
                const double lin = (s_.is_rct() && arm == 1) ? truth_.beta : 0.0;
                // exp(lin) scales the hazard, moving the median to theta * exp(-lin / kappa).
                event_times_.push_back(
                    sample_weibull_median(base_, truth_.theta * std::exp(-lin / truth_.kappa), truth_.kappa));
            }
        } else {
            treatment_.generate(s_.endpoint, {truth_.theta, truth_.sigma_sq}, s_.n_max, base_);
            if (s_.is_rct())
                control_.generate(s_.endpoint, {truth_.theta_control, truth_.sigma_sq_control}, s_.n_max, base_);
        }
    }

    const Truth& truth() const { return truth_; }

    int enrolled(int j) const {
        if (s_.endpoint != Endpoint::survival) return s_.analysis_size(j) * s_.n_arms();
        const auto& a = plan_.arrivals;
        return static_cast<int>(std::upper_bound(a.begin(), a.end(), times_[j]) - a.begin());
    }

    double prob(int j) {
        if (s_.endpoint == Endpoint::survival) return summary(j).prob_superior;
        auto& slot = probs_[static_cast<std::size_t>(j)];
        if (slot) return *slot;
        const int n = s_.analysis_size(j);
        const Posterior pt = arm_posterior(s_.endpoint, s_.user, treatment_, n);
        if (!s_.is_rct()) {
            slot = prob_superior_single(pt, s_.theta0, s_.delta);
        } else {
            const Posterior pc = arm_posterior(s_.endpoint, s_.user_control, control_, n);
            slot = prob_superior_rct(pt, pc, s_.delta);
        }
        return *slot;
    }

    const PosteriorSummary& summary(int j) {
        auto& slot = analyses_[static_cast<std::size_t>(j)];
        if (slot) return *slot;
        if (s_.endpoint == Endpoint::survival) {
            const SurvData data = observe_at(plan_, event_times_, times_[j]);
            RngStream rng = base_.substream(kMcmcSubstreamBase + static_cast<std::uint32_t>(j));
            const PosteriorDraws draws = sample_posterior(s_.user_surv, data, s_.mcmc, s_.is_rct(), rng);
            slot = summarize_draws(draws, s_.is_rct() ? SummaryTarget::hazard_ratio : SummaryTarget::theta,
                                   s_.theta0, s_.delta, s_.rho);
        } else {
            const Posterior pt = arm_posterior(s_.endpoint, s_.user, treatment_, s_.analysis_size(j));
            slot = summarize_single(pt, s_.theta0, s_.delta);
            slot->prob_superior = prob(j);
        }
        return *slot;
    }

    TrialRecord record(int stop, bool rejected) {
        TrialRecord r;
        r.truth = truth_;
        r.true_value = target_value(s_, truth_);
        r.h0_true = null_is_true(s_, truth_);
        r.rejected = rejected;
        r.stop_analysis = stop;
        r.final_n = enrolled(stop);
        r.summary = summary(stop);
        return r;
    }

    TrialRecord fixed() {
        const int last = s_.n_analyses() - 1;
        return record(last, prob(last) > s_.cutoff);
    }

    TrialRecord adaptive() {
        const int last = s_.n_analyses() - 1;
        for (int j = 0; j < last; ++j)
            if (prob(j) > s_.cutoff) return record(j, true);
        return record(last, prob(last) > s_.cutoff);
    }

private:
    const Scenario& s_;
    RngStream base_;
    Truth truth_;
    ArmData treatment_;
    ArmData control_;
    AccrualPlan plan_;
    std::vector<double> times_;
    std::vector<double> event_times_;
    std::vector<std::optional<double>> probs_;
    std::vector<std::optional<PosteriorSummary>> analyses_;
};

}  // namespace

double target_value(const Scenario& scenario, const Truth& truth) {
    if (scenario.endpoint == Endpoint::survival && scenario.is_rct()) return std::exp(truth.beta);
    return truth.theta;
}

bool null_is_true(const Scenario& scenario, const Truth& truth) {
    if (scenario.endpoint == Endpoint::survival && scenario.is_rct()) return std::exp(truth.beta) >= scenario.rho;
    if (scenario.is_rct()) return truth.theta - truth.theta_control <= scenario.delta;
    return truth.theta - scenario.theta0 <= scenario.delta;
}

Truth draw_truth(const Scenario& scenario, RngStream& rng) {
    Truth t;
    if (scenario.endpoint == Endpoint::survival) {
        const auto& g = scenario.generating_surv;
        t.theta = sample_gamma(rng, g.theta_shape, g.theta_rate);
        t.kappa = sample_gamma(rng, g.kappa_shape, g.kappa_rate);
        if (scenario.is_rct()) t.beta = sample_normal(rng, g.beta_mean, std::sqrt(g.beta_var));
        return t;
    }
    const ArmTruth treated = draw_arm(scenario.generating, rng);
    t.theta = treated.theta;
    t.sigma_sq = treated.sigma_sq;
    if (scenario.is_rct()) {
        const ArmTruth control = draw_arm(scenario.generating_control, rng);
        t.theta_control = control.theta;
        t.sigma_sq_control = control.sigma_sq;
    }
    return t;
}

AccrualPlan build_accrual(const Scenario& scenario, RngStream& rng) {
    if (!(scenario.accrual_rate > 0.0)) throw std::invalid_argument("build_accrual: accrual_rate must be positive");
    const int total = scenario.n_max * scenario.n_arms();
    AccrualPlan plan;
    plan.arrivals.reserve(total);
    plan.arms.reserve(total);
    double clock = 0.0;
    for (int i = 0; i < total; ++i) {
        clock += sample_exponential(rng, scenario.accrual_rate);
        plan.arrivals.push_back(clock);
    }
    if (!scenario.is_rct()) {
        plan.arms.assign(total, 1);
    } else {
        for (int i = 0; i < total; i += 2) {
            const bool treated_first = rng.uniform() < 0.5;
            plan.arms.push_back(treated_first ? 1 : 0);
            plan.arms.push_back(treated_first ? 0 : 1);
        }
    }
    return plan;
}

std::vector<double> analysis_times(const Scenario& scenario, const AccrualPlan& plan) {
    std::vector<double> times;
    times.reserve(scenario.interims.size() + 1);
    for (int n : scenario.interims) times.push_back(plan.arrivals.at(static_cast<std::size_t>(n * scenario.n_arms() - 1)));
    times.push_back(plan.arrivals.back() + scenario.followup_months);
    return times;
}

SurvData observe_at(const AccrualPlan& plan, const std::vector<double>& event_times, double time) {
    SurvData data;
    for (std::size_t i = 0; i < plan.arrivals.size() && plan.arrivals[i] <= time; ++i) {
        const double window = time - plan.arrivals[i];
        const bool event = event_times[i] <= window;
        data.push_back({event ? event_times[i] : window, event, plan.arms[i]});
    }
    return data;
}

TrialRecord run_trial(const Scenario& scenario, std::size_t replicate) {
    TrialSimulator sim(scenario, replicate);
    return sim.adaptive();
}

PairedRecord run_trial_paired(const Scenario& scenario, std::size_t replicate) {
    TrialSimulator sim(scenario, replicate);
    PairedRecord out;
    out.adaptive = sim.adaptive();
    out.fixed = sim.fixed();
    return out;
}

FinalAnalysis run_final_analysis(const Scenario& scenario, std::size_t replicate) {
    TrialSimulator sim(scenario, replicate);
    return {sim.prob(scenario.n_analyses() - 1), null_is_true(scenario, sim.truth())};
}

unsigned default_thread_count() {
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::string> parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body,
                                      const std::function<void(std::size_t, std::size_t)>& progress) {
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
                if (errors[i].empty()) errors[i] = "unknown error";
            }
            const std::size_t d = ++done;
            if (progress && (d % 256 == 0 || d == n)) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(d, n);
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return errors;
}

namespace {

std::vector<ReplicateFailure> collect_failures(const std::vector<std::string>& errors, std::size_t n) {
    std::vector<ReplicateFailure> failures;
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) failures.push_back({i, errors[i]});
    if (!failures.empty() && failures.size() * 1000 > n) {
        std::string msg = std::to_string(failures.size()) + " of " + std::to_string(n) +
                          " replicates failed (limit 0.1%); first: replicate " +
                          std::to_string(failures.front().replicate) + ": " + failures.front().message;
        throw SimulationError(msg);
    }
    return failures;
}

template <class T>
std::vector<T> compact(std::vector<std::optional<T>>& slots) {
    std::vector<T> out;
    out.reserve(slots.size());
    for (auto& s : slots)
        if (s) out.push_back(std::move(*s));
    return out;
}

}  // namespace

ScenarioRun run_scenario(const Scenario& scenario, const RunOptions& options) {
    scenario.validate();
    const std::size_t n = scenario.n_replicates;
    std::vector<std::optional<TrialRecord>> adaptive(n);
    std::vector<std::optional<TrialRecord>> fixed(options.paired ? n : 0);
    const auto errors = parallel_for(
        n, options.threads,
        [&](std::size_t i) {
            if (options.paired) {
                PairedRecord p = run_trial_paired(scenario, i);
                adaptive[i] = std::move(p.adaptive);
                fixed[i] = std::move(p.fixed);
            } else {
                adaptive[i] = run_trial(scenario, i);
            }
        },
        options.progress);
    ScenarioRun run;
    run.failures = collect_failures(errors, n);
    run.records = compact(adaptive);
    run.fixed_records = compact(fixed);
    return run;
}

std::vector<FinalAnalysis> run_final_analyses(const Scenario& scenario, const RunOptions& options) {
    scenario.validate();
    const std::size_t n = scenario.n_replicates;
    std::vector<std::optional<FinalAnalysis>> out(n);
    const auto errors = parallel_for(
        n, options.threads, [&](std::size_t i) { out[i] = run_final_analysis(scenario, i); }, options.progress);
    collect_failures(errors, n);
    return compact(out);
}

}  // namespace interimsim

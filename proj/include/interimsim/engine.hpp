#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "interimsim/posterior_summary.hpp"
#include "interimsim/rng.hpp"
#include "interimsim/scenario.hpp"

namespace interimsim {

/* Parameters drawn from the data-generating prior for one replicate. */
struct Truth {
    double theta = 0.0;             // treatment-arm parameter (median for survival)
    double theta_control = 0.0;     // two-arm closed-form endpoints
    double sigma_sq = 1.0;          // data variance, treatment arm
    double sigma_sq_control = 1.0;  // data variance, control arm
    double kappa = 1.0;             // survival shape
    double beta = 0.0;              // survival log hazard ratio
};

/*
 * The estimand for bias, MSE and coverage: the treatment-arm theta, or the
 * hazard ratio exp(beta) for two-arm survival. Two-arm closed-form hypotheses
 * concern theta_t - theta_c.
 */
double target_value(const Scenario& scenario, const Truth& truth);
bool null_is_true(const Scenario& scenario, const Truth& truth);

struct TrialRecord {
    Truth truth;
    double true_value = 0.0;  // see target_value
    bool h0_true = false;
    bool rejected = false;
    int stop_analysis = 0;    // index into interims + final
    int final_n = 0;          // total enrolled at the stopping analysis, all arms
    PosteriorSummary summary;
};

struct AccrualPlan {
    std::vector<double> arrivals;  // months, nondecreasing
    std::vector<int> arms;         // 1 experimental, 0 control
};

Truth draw_truth(const Scenario& scenario, RngStream& rng);

/* Poisson arrivals; two-arm trials use 1:1 permuted blocks of two. */
AccrualPlan build_accrual(const Scenario& scenario, RngStream& rng);

/*
 * Calendar time of each analysis: interim j at the arrival of the patient
 * completing interims[j] per arm, the final at the last arrival plus follow-up.
 */
std::vector<double> analysis_times(const Scenario& scenario, const AccrualPlan& plan);

/* Administratively censored data visible at `time` for patients enrolled by then. */
SurvData observe_at(const AccrualPlan& plan, const std::vector<double>& event_times, double time);

TrialRecord run_trial(const Scenario& scenario, std::size_t replicate);

/* Fixed design (final analysis only) and the scenario's design on shared truth and data. */
struct PairedRecord {
    TrialRecord fixed;
    TrialRecord adaptive;
};
PairedRecord run_trial_paired(const Scenario& scenario, std::size_t replicate);

/* Pr(H_a | D_N) at the final analysis, for threshold sweeps. */
struct FinalAnalysis {
    double prob_superior = 0.0;
    bool h0_true = false;
};
FinalAnalysis run_final_analysis(const Scenario& scenario, std::size_t replicate);

struct ReplicateFailure {
    std::size_t replicate = 0;
    std::string message;
};

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    unsigned threads = 1;
    bool paired = false;  // also produce fixed-design records on the same streams
    std::function<void(std::size_t done, std::size_t total)> progress;
};

struct ScenarioRun {
    std::vector<TrialRecord> records;        // the scenario's design, by replicate index
    std::vector<TrialRecord> fixed_records;  // filled when paired
    std::vector<ReplicateFailure> failures;
};

/* Failed replicates are dropped and reported; more than 0.1% failing throws SimulationError. */
ScenarioRun run_scenario(const Scenario& scenario, const RunOptions& options = {});

std::vector<FinalAnalysis> run_final_analyses(const Scenario& scenario, const RunOptions& options = {});

/* Runs body(i) for i in [0, n) on `threads` workers; exceptions are captured per index. */
std::vector<std::string> parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body,
                                      const std::function<void(std::size_t, std::size_t)>& progress = {});

unsigned default_thread_count();

}  // namespace interimsim

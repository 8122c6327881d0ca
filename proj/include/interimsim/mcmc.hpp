#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "interimsim/posterior_summary.hpp"
#include "interimsim/rng.hpp"

namespace interimsim {

/*
 * Priors of the Weibull / Cox-Weibull survival models. Gamma priors use the
 * shape-rate parameterization; beta fields are used by the two-arm model only.
 */
struct SurvPrior {
    double theta_shape = 1.0;
    double theta_rate = 1.0;
    double kappa_shape = 1.0;
    double kappa_rate = 1.0;
    double beta_mean = 0.0;
    double beta_var = 1.0;

    void validate() const;
    bool operator==(const SurvPrior&) const = default;
};

struct SurvObservation {
    double time = 0.0;
    bool event = false;
    int arm = 1;  // 1 = experimental, 0 = control
};

using SurvData = std::vector<SurvObservation>;

struct McmcConfig {
    int n_iter = 6000;
    int burn_in = 2000;
    int thin = 2;
    double scale_theta = 0.1;  // log-scale random walk sd
    double scale_kappa = 0.1;  // log-scale random walk sd
    double scale_beta = 0.2;   // linear random walk sd
    bool adapt_during_burnin = true;

    void validate() const;
    int retained() const { return (n_iter - burn_in) / thin; }
    bool operator==(const McmcConfig&) const = default;
};

/* Retained draws: columns (theta, kappa) or (theta, kappa, beta). */
struct PosteriorDraws {
    Eigen::MatrixXd draws;
    Eigen::Vector3d acceptance = Eigen::Vector3d::Zero();
    bool rct = false;
    bool from_prior = false;  // no data: exact prior draws, no chain

    Eigen::Index size() const { return draws.rows(); }
    auto theta() const { return draws.col(0); }
    auto kappa() const { return draws.col(1); }
    auto beta() const { return draws.col(2); }
};

class McmcError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double log_lik_weibull(double theta, double kappa, const SurvData& data);
double log_lik_cox_weibull(double theta, double kappa, double beta, const SurvData& data);

/*
 * Metropolis-within-Gibbs state for one chain. Caches per-arm sums of
 * t_i^kappa so theta and beta updates cost O(1) and kappa updates O(n).
 */
class WeibullChain {
public:
    struct State {
        double theta = 1.0;
        double kappa = 1.0;
        double beta = 0.0;
    };

    WeibullChain(const SurvPrior& prior, const SurvData& data, bool rct);

    /* Returns false when the log posterior is not finite at `state`. */
    bool set_state(const State& state);
    const State& state() const { return state_; }
    double log_posterior() const { return log_post_; }

    /* One theta -> kappa [-> beta] cycle; `accepted` counts per component. */
    void sweep(RngStream& rng, const Eigen::Vector3d& scales, Eigen::Vector3d& accepted);

private:
    double log_post(double theta, double kappa, double beta, double s0, double s1) const;
    void power_sums(double kappa, double& s0, double& s1) const;

    SurvPrior prior_;
    bool rct_;
    std::vector<double> log_t_;
    std::vector<unsigned char> group_;  // 1 when the observation carries exp(beta)
    double events_ = 0.0;
    double events_treated_ = 0.0;
    double sum_event_log_t_ = 0.0;

    State state_;
    double s0_ = 0.0;
    double s1_ = 0.0;
    double log_post_ = 0.0;
};

WeibullChain::State draw_from_prior(const SurvPrior& prior, bool rct, RngStream& rng);

PosteriorDraws sample_posterior(const SurvPrior& prior, const SurvData& data, const McmcConfig& config, bool rct,
                                RngStream& rng);

enum class SummaryTarget { theta, hazard_ratio };

/*
 * theta target: Pr(theta > theta0 + delta), intervals on theta.
 * hazard_ratio target: Pr(exp(beta) < rho), one-sided interval (0, HR_0.95].
 */
PosteriorSummary summarize_draws(const PosteriorDraws& draws, SummaryTarget target, double theta0, double delta,
                                 double rho);

/* Sample quantile with linear interpolation between order statistics. */
double empirical_quantile(const std::vector<double>& sorted, double p);

}  // namespace interimsim

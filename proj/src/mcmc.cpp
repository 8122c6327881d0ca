#include "interimsim/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "interimsim/specfun.hpp"

namespace interimsim {

namespace {

const double kLn2 = std::log(2.0);
const double kLogLn2 = std::log(std::log(2.0));
constexpr double kTargetAcceptance = 0.44;
constexpr int kMaxInitAttempts = 100;

double safe_log_time(double t) {
    return std::log(std::max(t, std::numeric_limits<double>::min()));
}

/* Shared by the public likelihoods; beta multiplies the hazard of arm-1 patients. */
double weibull_log_lik(double theta, double kappa, double beta, const SurvData& data, bool use_arm) {
    if (!(theta > 0.0 && kappa > 0.0)) throw std::invalid_argument("log likelihood: theta and kappa must be positive");
    const double log_theta = std::log(theta);
    double total = 0.0;
    for (const auto& obs : data) {
        const double lt = safe_log_time(obs.time);
        const double lin = (use_arm && obs.arm == 1) ? beta : 0.0;
        const double cum_hazard = kLn2 * std::exp(kappa * (lt - log_theta) + lin);
        total -= cum_hazard;
        if (obs.event) total += kLogLn2 + std::log(kappa) - kappa * log_theta + (kappa - 1.0) * lt + lin;
    }
    return std::isnan(total) ? -kInf : total;
}

}  // namespace

void SurvPrior::validate() const {
    if (!(theta_shape > 0.0 && theta_rate > 0.0 && kappa_shape > 0.0 && kappa_rate > 0.0 && beta_var > 0.0))
        throw std::invalid_argument("SurvPrior: shapes, rates and beta_var must be positive");
}

void McmcConfig::validate() const {
    if (n_iter <= 0 || burn_in < 0 || burn_in >= n_iter) throw std::invalid_argument("McmcConfig: need 0 <= burn_in < n_iter");
    if (thin < 1) throw std::invalid_argument("McmcConfig: thin must be >= 1");
    if (!(scale_theta > 0.0 && scale_kappa > 0.0 && scale_beta > 0.0))
        throw std::invalid_argument("McmcConfig: proposal scales must be positive");
    if (retained() < 1000)
        throw std::invalid_argument("McmcConfig: fewer than 1000 retained draws (" + std::to_string(retained()) + ")");
}

double log_lik_weibull(double theta, double kappa, const SurvData& data) {
    return weibull_log_lik(theta, kappa, 0.0, data, false);
}

double log_lik_cox_weibull(double theta, double kappa, double beta, const SurvData& data) {
    return weibull_log_lik(theta, kappa, beta, data, true);
}

WeibullChain::WeibullChain(const SurvPrior& prior, const SurvData& data, bool rct) : prior_(prior), rct_(rct) {
    prior_.validate();
    log_t_.reserve(data.size());
    group_.reserve(data.size());
    for (const auto& obs : data) {
        if (obs.time < 0.0) throw std::invalid_argument("WeibullChain: negative time");
        const double lt = safe_log_time(obs.time);
        const bool treated = rct_ && obs.arm == 1;
        log_t_.push_back(lt);
        group_.push_back(treated ? 1 : 0);
        if (obs.event) {
            events_ += 1.0;
            sum_event_log_t_ += lt;
            if (treated) events_treated_ += 1.0;
        }
    }
}

void WeibullChain::power_sums(double kappa, double& s0, double& s1) const {
    s0 = 0.0;
    s1 = 0.0;
    for (std::size_t i = 0; i < log_t_.size(); ++i) {
        const double v = std::exp(kappa * log_t_[i]);
        (group_[i] ? s1 : s0) += v;
    }
}

double WeibullChain::log_post(double theta, double kappa, double beta, double s0, double s1) const {
    const double log_theta = std::log(theta);
    const double log_kappa = std::log(kappa);
    double lp = (prior_.theta_shape - 1.0) * log_theta - prior_.theta_rate * theta +
                (prior_.kappa_shape - 1.0) * log_kappa - prior_.kappa_rate * kappa;
    if (rct_) {
        const double d = beta - prior_.beta_mean;
        lp -= 0.5 * d * d / prior_.beta_var;
    }
    lp += events_ * (kLogLn2 + log_kappa - kappa * log_theta) + (kappa - 1.0) * sum_event_log_t_ +
          beta * events_treated_;
    lp -= kLn2 * std::exp(-kappa * log_theta) * (s0 + std::exp(beta) * s1);
    return std::isnan(lp) ? -kInf : lp;
}

bool WeibullChain::set_state(const State& state) {
    state_ = state;
    if (!rct_) state_.beta = 0.0;
    if (!(state_.theta > 0.0 && state_.kappa > 0.0)) return false;
    power_sums(state_.kappa, s0_, s1_);
    log_post_ = log_post(state_.theta, state_.kappa, state_.beta, s0_, s1_);
    return std::isfinite(log_post_);
}

void WeibullChain::sweep(RngStream& rng, const Eigen::Vector3d& scales, Eigen::Vector3d& accepted) {
    // theta: log-scale random walk; log(theta') - log(theta) is the Jacobian term.
    {
        const double step = scales[0] * sample_normal(rng);
        const double theta = state_.theta * std::exp(step);
        const double lp = log_post(theta, state_.kappa, state_.beta, s0_, s1_);
        if (std::log(rng.uniform()) < lp - log_post_ + step) {
            state_.theta = theta;
            log_post_ = lp;
            accepted[0] += 1.0;
        }
    }
    {
        const double step = scales[1] * sample_normal(rng);
        const double kappa = state_.kappa * std::exp(step);
        double s0, s1;
        power_sums(kappa, s0, s1);
        const double lp = log_post(state_.theta, kappa, state_.beta, s0, s1);
        if (std::log(rng.uniform()) < lp - log_post_ + step) {
            state_.kappa = kappa;
            s0_ = s0;
            s1_ = s1;
            log_post_ = lp;
            accepted[1] += 1.0;
        }
    }
    if (rct_) {
        const double beta = state_.beta + scales[2] * sample_normal(rng);
        const double lp = log_post(state_.theta, state_.kappa, beta, s0_, s1_);
        if (std::log(rng.uniform()) < lp - log_post_) {
            state_.beta = beta;
            log_post_ = lp;
            accepted[2] += 1.0;
        }
    }
}

WeibullChain::State draw_from_prior(const SurvPrior& prior, bool rct, RngStream& rng) {
    WeibullChain::State s;
    s.theta = sample_gamma(rng, prior.theta_shape, prior.theta_rate);
    s.kappa = sample_gamma(rng, prior.kappa_shape, prior.kappa_rate);
    s.beta = rct ? sample_normal(rng, prior.beta_mean, std::sqrt(prior.beta_var)) : 0.0;
    return s;
}

PosteriorDraws sample_posterior(const SurvPrior& prior, const SurvData& data, const McmcConfig& config, bool rct,
                                RngStream& rng) {
    prior.validate();
    config.validate();
    const int kept = config.retained();
    const int cols = rct ? 3 : 2;

    PosteriorDraws out;
    out.rct = rct;
    out.draws.resize(kept, cols);

    if (data.empty()) {
        for (int i = 0; i < kept; ++i) {
            const auto s = draw_from_prior(prior, rct, rng);
            out.draws(i, 0) = s.theta;
            out.draws(i, 1) = s.kappa;
            if (rct) out.draws(i, 2) = s.beta;
        }
        out.acceptance.setOnes();
        out.from_prior = true;
        return out;
    }

    WeibullChain chain(prior, data, rct);
    WeibullChain::State init{prior.theta_shape / prior.theta_rate, prior.kappa_shape / prior.kappa_rate,
                             rct ? prior.beta_mean : 0.0};
    int attempts = 0;
    while (!chain.set_state(init)) {
        if (++attempts > kMaxInitAttempts)
            throw McmcError("sample_posterior: no finite log posterior after " + std::to_string(kMaxInitAttempts) +
                            " prior initializations");
        init = draw_from_prior(prior, rct, rng);
    }

    Eigen::Vector3d log_scales(std::log(config.scale_theta), std::log(config.scale_kappa), std::log(config.scale_beta));
    Eigen::Vector3d accepted = Eigen::Vector3d::Zero();
    Eigen::Vector3d step_accept;
    int row = 0;
    for (int it = 0; it < config.n_iter; ++it) {
        step_accept.setZero();
        chain.sweep(rng, log_scales.array().exp().matrix(), step_accept);
        if (it < config.burn_in) {
            if (config.adapt_during_burnin) {
                // Robbins-Monro on the log proposal sd, frozen after burn-in.
                const double gain = 2.0 / std::pow(it + 10.0, 0.6);
                log_scales += gain * (step_accept.array() - kTargetAcceptance).matrix();
                log_scales = log_scales.cwiseMax(-12.0).cwiseMin(5.0);
            }
            continue;
        }
        accepted += step_accept;
        if ((it - config.burn_in + 1) % config.thin == 0 && row < kept) {
            const auto& s = chain.state();
            out.draws(row, 0) = s.theta;
            out.draws(row, 1) = s.kappa;
            if (rct) out.draws(row, 2) = s.beta;
            ++row;
        }
    }
    out.acceptance = accepted / static_cast<double>(config.n_iter - config.burn_in);
    if (!rct) out.acceptance[2] = 0.0;
    return out;
}

double empirical_quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    const double h = (sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

PosteriorSummary summarize_draws(const PosteriorDraws& draws, SummaryTarget target, double theta0, double delta,
                                 double rho) {
    if (draws.size() < 1000)
        throw std::invalid_argument("summarize_draws: need at least 1000 draws, got " + std::to_string(draws.size()));
    std::vector<double> values(static_cast<std::size_t>(draws.size()));
    if (target == SummaryTarget::hazard_ratio) {
        if (!draws.rct) throw std::invalid_argument("summarize_draws: hazard ratio needs two-arm draws");
        Eigen::Map<Eigen::VectorXd>(values.data(), draws.size()) = draws.beta().array().exp();
    } else {
        Eigen::Map<Eigen::VectorXd>(values.data(), draws.size()) = draws.theta();
    }

    PosteriorSummary s;
    const double n = static_cast<double>(values.size());
    std::size_t hits = 0;
    if (target == SummaryTarget::hazard_ratio) {
        hits = std::count_if(values.begin(), values.end(), [&](double hr) { return hr < rho; });
    } else {
        hits = std::count_if(values.begin(), values.end(), [&](double t) { return t > theta0 + delta; });
    }
    s.prob_superior = hits / n;
    s.post_mean = Eigen::Map<const Eigen::VectorXd>(values.data(), draws.size()).mean();

    std::sort(values.begin(), values.end());
    if (target == SummaryTarget::hazard_ratio) {
        s.ci_one_sided = {0.0, empirical_quantile(values, 0.95)};
    } else {
        s.ci_one_sided = {empirical_quantile(values, 0.05), kInf};
    }
    s.ci_symmetric = {empirical_quantile(values, 0.025), empirical_quantile(values, 0.975)};
    return s;
}

}  // namespace interimsim

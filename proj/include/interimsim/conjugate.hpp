#pragma once

#include <variant>

#include "interimsim/posterior_summary.hpp"

namespace interimsim {

/* Beta(alpha, beta); used both as a prior and as the binary posterior. */
struct BetaPrior {
    double alpha = 1.0;
    double beta = 1.0;

    void validate() const;
    double mean() const { return alpha / (alpha + beta); }
    bool operator==(const BetaPrior&) const = default;
};

/* theta ~ N(mu, sigma0_sq) with data X ~ N(theta, sigma_sq), sigma_sq known. */
struct NormalKnownVarPrior {
    double mu = 0.0;
    double sigma0_sq = 1.0;
    double sigma_sq = 1.0;

    void validate() const;
    bool operator==(const NormalKnownVarPrior&) const = default;
};

/* theta | s2 ~ N(mu, s2 / kappa), s2 ~ Inv-chi2(nu, sigma0_sq). */
struct NixPrior {
    double mu = 0.0;
    double kappa = 1.0;
    double nu = 1.0;
    double sigma0_sq = 1.0;

    void validate() const;
    bool operator==(const NixPrior&) const = default;
};

struct BinaryData {
    long n = 0;
    long successes = 0;

    void validate() const;
    BinaryData& operator+=(const BinaryData& other);
};

/* Sufficient statistics of a normal sample. */
struct NormalData {
    long n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        ++n;
        sum += x;
        sum_sq += x * x;
    }
    double mean() const { return n > 0 ? sum / n : 0.0; }
    /* sum of (x_i - mean)^2, clamped at zero against cancellation */
    double centered_ss() const;
    void validate() const;
};

struct NormalPosterior {
    double mean = 0.0;
    double var = 1.0;
};

/* Location-scale Student t; scale_sq is the squared scale. */
struct TPosterior {
    double dof = 1.0;
    double location = 0.0;
    double scale_sq = 1.0;
};

using Posterior = std::variant<BetaPrior, NormalPosterior, TPosterior>;

BetaPrior beta_posterior(const BetaPrior& prior, const BinaryData& data);
NormalPosterior normal_known_posterior(const NormalKnownVarPrior& prior, const NormalData& data);
TPosterior nix_posterior(const NixPrior& prior, const NormalData& data);

double posterior_mean(const Posterior& post);
bool posterior_mean_defined(const Posterior& post);
double posterior_cdf(const Posterior& post, double x);
double posterior_quantile(const Posterior& post, double p);

/* Pr(theta - theta0 > delta | D). */
double prob_superior_single(const Posterior& post, double theta0, double delta);

/*
 * Pr(theta_t - theta_c > delta | D) for independent arm posteriors of the same
 * family. Normal pairs are closed form; beta and t pairs use adaptive
 * Gauss-Kronrod quadrature of one arm's density against the other's tail.
 */
double prob_superior_rct(const Posterior& treatment, const Posterior& control, double delta);

Interval credible_interval(const Posterior& post, CiKind kind);

PosteriorSummary summarize_single(const Posterior& post, double theta0, double delta);
/* Decision on theta_t - theta_c; mean and intervals describe the treatment arm's theta. */
PosteriorSummary summarize_rct(const Posterior& treatment, const Posterior& control, double delta);

}  // namespace interimsim

#include "interimsim/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace interimsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Tail mass dropped when integrating over an arm's effective support.
constexpr double kTailMass = 1e-15;

/*
 * One arm's marginal posterior, viewed through the handful of functions the
 * two-arm integrals need.
 */
class ArmDistribution {
public:
    explicit ArmDistribution(const Posterior& post) : post_(post) {}

    double density(double x) const {
        return std::visit(overloaded{
                              [&](const BetaPrior& b) { return std::exp(beta_log_density(x, b.alpha, b.beta)); },
                              [&](const NormalPosterior& n) {
                                  const double z = (x - n.mean) / std::sqrt(n.var);
                                  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI * n.var);
                              },
                              [&](const TPosterior& t) {
                                  const double s = std::sqrt(t.scale_sq);
                                  return std::exp(student_t_log_density((x - t.location) / s, t.dof)) / s;
                              }},
                          post_);
    }

    double cdf(double x) const { return posterior_cdf(post_, x); }

    /* Pr(X > x), computed without cancellation. */
    double sf(double x) const {
        return std::visit(overloaded{
                              [&](const BetaPrior& b) {
                                  if (x <= 0.0) return 1.0;
                                  if (x >= 1.0) return 0.0;
                                  return boost::math::ibetac(b.alpha, b.beta, x);
                              },
                              [&](const NormalPosterior& n) { return normal_cdf((n.mean - x) / std::sqrt(n.var)); },
                              [&](const TPosterior& t) {
                                  return student_t_cdf((t.location - x) / std::sqrt(t.scale_sq), t.dof);
                              }},
                          post_);
    }

    double quantile(double p) const { return posterior_quantile(post_, p); }

    /* Larger is smoother; used to pick the integration variable. */
    double regularity() const {
        return std::visit(overloaded{[](const BetaPrior& b) { return std::min(b.alpha, b.beta); },
                                     [](const NormalPosterior&) { return kInf; },
                                     [](const TPosterior& t) { return t.dof; }},
                          post_);
    }

    bool bounded_density() const {
        return std::visit(overloaded{[](const BetaPrior& b) { return b.alpha >= 1.0 && b.beta >= 1.0; },
                                     [](const NormalPosterior&) { return true; },
                                     [](const TPosterior&) { return true; }},
                          post_);
    }

private:
    const Posterior& post_;
};

template <class F>
double integrate(F&& f, double lo, double hi) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-12, &error);
}

/* E_X[g(X)] over the arm's posterior, for g bounded in [0, 1]. */
template <class G>
double expect_over(const ArmDistribution& arm, G&& g) {
    if (arm.bounded_density()) {
        const double lo = arm.quantile(kTailMass);
        const double hi = arm.quantile(1.0 - kTailMass);
        return integrate([&](double x) { return arm.density(x) * g(x); }, lo, hi);
    }
    // Unbounded density: substitute u = F(x) so the integrand stays bounded.
    return integrate([&](double u) { return g(arm.quantile(u)); }, 0.0, 1.0);
}

void check_same_family(const Posterior& a, const Posterior& b) {
    if (a.index() != b.index())
        throw std::invalid_argument("prob_superior_rct: arm posteriors must share a family");
}

}  // namespace

void BetaPrior::validate() const {
    if (!(alpha > 0.0 && beta > 0.0)) throw std::invalid_argument("BetaPrior: alpha and beta must be positive");
}

void NormalKnownVarPrior::validate() const {
    if (!(sigma0_sq > 0.0 && sigma_sq > 0.0))
        throw std::invalid_argument("NormalKnownVarPrior: variances must be positive");
}

void NixPrior::validate() const {
    if (!(kappa > 0.0 && nu > 0.0 && sigma0_sq > 0.0))
        throw std::invalid_argument("NixPrior: kappa, nu and sigma0_sq must be positive");
}

void BinaryData::validate() const {
    if (n < 0 || successes < 0 || successes > n) throw std::invalid_argument("BinaryData: need 0 <= successes <= n");
}

BinaryData& BinaryData::operator+=(const BinaryData& other) {
    n += other.n;
    successes += other.successes;
    return *this;
}

double NormalData::centered_ss() const {
    if (n == 0) return 0.0;
    return std::max(0.0, sum_sq - sum * sum / n);
}

void NormalData::validate() const {
    if (n < 0) throw std::invalid_argument("NormalData: negative n");
    if (n == 0 && (sum != 0.0 || sum_sq != 0.0)) throw std::invalid_argument("NormalData: nonzero sums with n = 0");
}

BetaPrior beta_posterior(const BetaPrior& prior, const BinaryData& data) {
    prior.validate();
    data.validate();
    return {prior.alpha + data.successes, prior.beta + (data.n - data.successes)};
}

NormalPosterior normal_known_posterior(const NormalKnownVarPrior& prior, const NormalData& data) {
    prior.validate();
    data.validate();
    const double precision = 1.0 / prior.sigma0_sq + data.n / prior.sigma_sq;
    const double mean = (prior.mu / prior.sigma0_sq + data.sum / prior.sigma_sq) / precision;
    return {mean, 1.0 / precision};
}

TPosterior nix_posterior(const NixPrior& prior, const NormalData& data) {
    prior.validate();
    data.validate();
    const double n = static_cast<double>(data.n);
    const double xbar = data.mean();
    const double kn = prior.kappa + n;
    const double location = (n * xbar + prior.kappa * prior.mu) / kn;
    const double dev = xbar - prior.mu;
    const double scale_sq = (prior.nu * prior.sigma0_sq + data.centered_ss() + prior.kappa * n / kn * dev * dev) /
                            ((prior.nu + n) * kn);
    return {prior.nu + n, location, scale_sq};
}

double posterior_mean(const Posterior& post) {
    return std::visit(overloaded{[](const BetaPrior& b) { return b.mean(); },
                                 [](const NormalPosterior& n) { return n.mean; },
                                 [](const TPosterior& t) { return t.location; }},
                      post);
}

bool posterior_mean_defined(const Posterior& post) {
    if (const auto* t = std::get_if<TPosterior>(&post)) return t->dof > 1.0;
    return true;
}

double posterior_cdf(const Posterior& post, double x) {
    return std::visit(overloaded{
                          [&](const BetaPrior& b) {
                              if (x <= 0.0) return 0.0;
                              if (x >= 1.0) return 1.0;
                              return reg_inc_beta(x, b.alpha, b.beta);
                          },
                          [&](const NormalPosterior& n) { return normal_cdf((x - n.mean) / std::sqrt(n.var)); },
                          [&](const TPosterior& t) {
                              return student_t_cdf((x - t.location) / std::sqrt(t.scale_sq), t.dof);
                          }},
                      post);
}

double posterior_quantile(const Posterior& post, double p) {
    return std::visit(overloaded{
                          [&](const BetaPrior& b) { return beta_quantile(p, b.alpha, b.beta); },
                          [&](const NormalPosterior& n) { return n.mean + std::sqrt(n.var) * normal_quantile(p); },
                          [&](const TPosterior& t) {
                              return t.location + std::sqrt(t.scale_sq) * student_t_quantile(p, t.dof);
                          }},
                      post);
}

double prob_superior_single(const Posterior& post, double theta0, double delta) {
    return ArmDistribution(post).sf(theta0 + delta);
}

double prob_superior_rct(const Posterior& treatment, const Posterior& control, double delta) {
    check_same_family(treatment, control);
    if (const auto* nt = std::get_if<NormalPosterior>(&treatment)) {
        const auto& nc = std::get<NormalPosterior>(control);
        return normal_cdf((nt->mean - nc.mean - delta) / std::sqrt(nt->var + nc.var));
    }
    const ArmDistribution t(treatment);
    const ArmDistribution c(control);
    double p;
    if (c.regularity() >= t.regularity()) {
        p = expect_over(c, [&](double y) { return t.sf(y + delta); });
    } else {
        p = expect_over(t, [&](double x) { return c.cdf(x - delta); });
    }
    return std::clamp(p, 0.0, 1.0);
}

Interval credible_interval(const Posterior& post, CiKind kind) {
    if (kind == CiKind::one_sided) return {posterior_quantile(post, 0.05), kInf};
    return {posterior_quantile(post, 0.025), posterior_quantile(post, 0.975)};
}

PosteriorSummary summarize_single(const Posterior& post, double theta0, double delta) {
    PosteriorSummary s;
    s.prob_superior = prob_superior_single(post, theta0, delta);
    s.post_mean = posterior_mean(post);
    s.mean_defined = posterior_mean_defined(post);
    s.ci_one_sided = credible_interval(post, CiKind::one_sided);
    s.ci_symmetric = credible_interval(post, CiKind::symmetric);
    return s;
}

PosteriorSummary summarize_rct(const Posterior& treatment, const Posterior& control, double delta) {
    PosteriorSummary s = summarize_single(treatment, 0.0, 0.0);
    s.prob_superior = prob_superior_rct(treatment, control, delta);
    return s;
}

}  // namespace interimsim

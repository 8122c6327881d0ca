#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// library code, so each comparison has two separate routes to the answer.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline const double kPi = 3.14159265358979323846;

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/* Adaptive Simpson quadrature with Richardson correction. */
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13, int depth = 50) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

/* Integral split into n panels, each adaptive; robust for peaked integrands. */
inline double simpson_panels(const std::function<double(double)>& f, double a, double b, int n, double tol = 1e-14) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += simpson(f, a + (b - a) * i / n, a + (b - a) * (i + 1) / n, tol / n);
    return total;
}

/* erf by its Maclaurin series; accurate to ~1e-15 for |x| <= 3. */
inline double erf_series(double x) {
    double term = x, sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        const double add = term / (2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18) break;
    }
    return 2.0 / std::sqrt(kPi) * sum;
}

inline double phi_series(double z) {
    return 0.5 * (1.0 + erf_series(z / std::sqrt(2.0)));
}

inline double log_beta_fn(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

inline double beta_pdf(double x, double a, double b) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp((a - 1) * std::log(x) + (b - 1) * std::log1p(-x) - log_beta_fn(a, b));
}

inline double gamma_pdf(double x, double shape, double rate) {
    if (x <= 0.0) return 0.0;
    return std::exp(shape * std::log(rate) + (shape - 1) * std::log(x) - rate * x - std::lgamma(shape));
}

inline double t_pdf(double x, double dof) {
    return std::exp(std::lgamma(0.5 * (dof + 1)) - std::lgamma(0.5 * dof) - 0.5 * std::log(dof * kPi) -
                    0.5 * (dof + 1) * std::log1p(x * x / dof));
}

/* Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration. */
struct GaussLegendre {
    std::vector<double> x, w;
    explicit GaussLegendre(int n) : x(n), w(n) {
        for (int i = 0; i < n; ++i) {
            double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
    /* Composite rule over `panels` equal pieces of [a, b]. */
    double integrate(const std::function<double(double)>& f, double a, double b, int panels = 1) const {
        double total = 0.0;
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * h, half = 0.5 * h, mid = lo + half;
            for (std::size_t i = 0; i < x.size(); ++i) total += w[i] * half * f(mid + half * x[i]);
        }
        return total;
    }
};

/* Bisection root of a monotone increasing function. */
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double target) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle

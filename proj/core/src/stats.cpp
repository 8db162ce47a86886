#include "funrate/stats.hpp"

#include <cmath>
#include <limits>

namespace funrate::stats {

namespace {

// Lentz's method for the continued fraction of the incomplete beta function.
double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;

    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete_beta: a, b must be positive");
    if (std::isnan(x)) throw Error("incomplete_beta: x is NaN");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);

    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cont_frac(a, b, x) / a;
    }
    return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double f_cdf(double x, int d1, int d2) {
    if (d1 < 1 || d2 < 1) throw Error("f_cdf: degrees of freedom must be >= 1");
    if (std::isnan(x)) throw Error("f_cdf: x is NaN");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double u = static_cast<double>(d1) * x;
    return incomplete_beta(0.5 * d1, 0.5 * d2, u / (u + static_cast<double>(d2)));
}

double t_cdf(double x, int dof) {
    if (dof < 1) throw Error("t_cdf: degrees of freedom must be >= 1");
    if (std::isnan(x)) throw Error("t_cdf: x is NaN");
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    const double p = 0.5 * incomplete_beta(0.5 * dof, 0.5, dof / (dof + x * x));
    return x >= 0.0 ? 1.0 - p : p;
}

double t_quantile(double p, int dof) {
    if (dof < 1) throw Error("t_quantile: degrees of freedom must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw Error("t_quantile: p must lie in (0,1)");
    if (p == 0.5) return 0.0;

    // Bisection bracket, then refine; t_cdf is strictly increasing.
    double lo = -1.0, hi = 1.0;
    while (t_cdf(lo, dof) > p) lo *= 2.0;
    while (t_cdf(hi, dof) < p) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (t_cdf(mid, dof) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace funrate::stats

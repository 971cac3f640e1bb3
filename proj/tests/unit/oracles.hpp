#pragma once

// Independent reference formulas used only by the tests. None of these go
// through the library's quadrature.

#include <cmath>

namespace occbound::testing {

inline double ref_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
inline double ref_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Expected Brownian local time at distance r up to T with diffusion b,
/// rescaled by b^2 / a^2: H_T(r) when k = 0.
inline double brownian_bound(double a, double b, double r, double T) {
    const double s = b * std::sqrt(T);
    return 2.0 * std::sqrt(T) * (b / (a * a)) * ref_pdf(r / s) - (2.0 * r / (a * a)) * ref_cdf(-r / s);
}

/// dH_T(r)/dr = -(1/a^2) P(first passage of x - k b^2 t + b W from r to 0 happens before T);
/// the inverse Gaussian distribution function.
inline double first_passage_dH(double a, double b, double k, double r, double T) {
    const double s = b * std::sqrt(T);
    const double v = k * b * std::sqrt(T) - r / s;
    const double w = -k * b * std::sqrt(T) - r / s;
    return -(ref_cdf(v) + std::exp(2.0 * k * r) * ref_cdf(w)) / (a * a);
}

/// r-derivative of first_passage_dH.
inline double first_passage_d2H(double a, double b, double k, double r, double T) {
    const double s = b * std::sqrt(T);
    const double v = k * b * std::sqrt(T) - r / s;
    const double w = -k * b * std::sqrt(T) - r / s;
    return 2.0 / (a * a) * (ref_pdf(v) / s - k * std::exp(2.0 * k * r) * ref_cdf(w));
}

/// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F&& f, double lo, double hi, int n) {
    if (n % 2) ++n;
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace occbound::testing

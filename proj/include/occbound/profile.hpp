#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace occbound::integral {

/**
 * Nonnegative f(y) with declared support [lo, hi]. Outside the support f may
 * be nonzero but must stay below tail_sup; bounds then add a tail certificate.
 * Breakpoints mark kinks or jumps the quadrature should not straddle.
 */
struct ProfileFunction {
    std::function<double(double y)> f;
    double lo = 0.0;
    double hi = 0.0;
    double tail_sup = 0.0;
    std::vector<double> breakpoints;
    std::string label;

    double operator()(double y) const { return f(y); }

    /// Throws UnboundedSupportError on a non-finite or empty support or a
    /// non-finite / negative tail_sup, DomainError if f < 0 on a sample grid.
    void validate() const;

    /// max of f on a sample grid of the support plus its breakpoints, and tail_sup.
    double sup_estimate(std::size_t samples = 2001) const;

    static ProfileFunction zero();
    /// 1 on [c, d], 0 elsewhere.
    static ProfileFunction indicator(double c, double d);
    /// height * max(0, 1 - |y - center| / half_width).
    static ProfileFunction tent(double center, double half_width, double height = 1.0);
    /// height * exp(-(y - mean)^2 / (2 sd^2)), support mean +- cutoff sd with the exact tail sup.
    static ProfileFunction gaussian(double mean, double sd, double height = 1.0, double cutoff = 10.0);
    /// Linear interpolation through (y, f) nodes, zero outside; nodes need increasing y.
    static ProfileFunction piecewise_linear(std::vector<std::pair<double, double>> nodes);
    /// alpha f + beta g on the union of supports; alpha, beta >= 0.
    static ProfileFunction combine(double alpha, const ProfileFunction& f, double beta, const ProfileFunction& g);
};

/**
 * Nonnegative f(t, y) on [0, T] x [lo, hi], nonincreasing in t. The flag records
 * the caller's claim; time_integral_bound verifies it on samples regardless.
 */
struct TimeProfileFunction {
    std::function<double(double t, double y)> f;
    double lo = 0.0;
    double hi = 0.0;
    double tail_sup = 0.0;
    std::vector<double> breakpoints;
    std::vector<double> time_breakpoints;
    bool nonincreasing_in_t = true;
    std::string label;

    double operator()(double t, double y) const { return f(t, y); }

    void validate() const;
    double sup_estimate(double T, std::size_t samples = 257) const;

    /// f(t, y) = g(y).
    static TimeProfileFunction from_profile(const ProfileFunction& g);
    /// f(t, y) = w(t) g(y) for a caller-supplied nonincreasing w >= 0.
    static TimeProfileFunction separable(std::function<double(double)> w, const ProfileFunction& g);
    /// y -> f(t0, y) as a ProfileFunction.
    ProfileFunction at_time(double t0) const;
};

/// Nodes of a piecewise-linear time profile, loaded from "t,y,f" rows.
struct TimeProfileNode {
    double t;
    double y;
    double f;
};
/// Bilinear interpolation on the tensor grid spanned by the rows (every (t, y)
/// pair must be present), zero outside the y range and constant beyond the t range.
/// Throws std::invalid_argument on an incomplete or unsorted grid.
TimeProfileFunction time_profile_from_grid(const std::vector<TimeProfileNode>& rows);

}  // namespace occbound::integral

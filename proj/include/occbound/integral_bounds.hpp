#pragma once

#include "occbound/coefficient_box.hpp"
#include "occbound/control.hpp"
#include "occbound/profile.hpp"
#include "occbound/simulation.hpp"

#include <string>
#include <vector>

namespace occbound::integral {

inline constexpr double kDefaultTol = 1e-8;

/// tail_sup times the bound mass of G(x, ., T) outside [lo, hi]; 0 when tail_sup = 0.
double tail_certificate(const CoefficientBox& box, double x, double T, double lo, double hi, double tail_sup);

/**
 * Upper bound on E[int_0^T f(X_s) ds] over all admissible controls started at x:
 * the integral of G(x, y, T) f(y) over the support plus the tail certificate.
 * abs_error_estimate covers the outer and inner quadratures.
 * Throws UnboundedSupportError / DomainError from f.validate().
 */
BoundReport path_integral_bound(const CoefficientBox& box, double x, double T, const ProfileFunction& f,
                                double tol = kDefaultTol);

/**
 * Time-refined bound: the double integral of density_rate(|x - y|, t) f(t, y)
 * over [0, T] x support (plus tail certificate). Throws HypothesisError if f
 * increases in t anywhere on a sample grid, DomainError if f < 0 there.
 */
BoundReport time_integral_bound(const CoefficientBox& box, double x, double T, const TimeProfileFunction& f,
                                double tol = kDefaultTol);

struct PathIntegralEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::size_t failed_paths = 0;
    std::vector<std::string> warnings;
};

/// Left-endpoint Riemann estimate of E[int_0^T f(X_s) ds] along Euler paths.
PathIntegralEstimate mc_path_integral(const sim::FeedbackControl& ctrl, const sim::SimConfig& cfg,
                                      const ProfileFunction& f);
PathIntegralEstimate mc_path_integral(const sim::FeedbackControl& ctrl, const sim::SimConfig& cfg,
                                      const TimeProfileFunction& f);

/// Euler slack for path integrals: 4 sup f (b sqrt(dt) + b^2 k dt) H_T(0),
/// i.e. a displacement of one step at each of two edges times the peak density.
double path_integral_budget(const CoefficientBox& box, double T, double dt, double f_sup);

}  // namespace occbound::integral
